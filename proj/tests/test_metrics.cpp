#include <doctest.h>

#include "recode/metrics.hpp"
#include "recode/rng.hpp"

using namespace recode;

namespace {

TopKPrediction ranked(BugType a, BugType b, BugType c) {
  return TopKPrediction({RankedType{a, 0.5}, RankedType{b, 0.3}, RankedType{c, 0.2}});
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("binary fixture") {
    const auto m = binary_metrics(3, 1, 5, 1);
    CHECK(m.precision == 0.75);
    CHECK(m.recall == 0.75);
    CHECK(m.accuracy == 0.8);
    CHECK(m.f1 == 0.75);
  }

  TEST_CASE("binary from label vectors") {
    const bool truth[] = {true, true, false, false, true};
    const bool pred[] = {true, false, false, true, true};
    const auto m = binary_metrics(truth, pred);
    CHECK(m.tp == 2);
    CHECK(m.fn == 1);
    CHECK(m.tn == 1);
    CHECK(m.fp == 1);
    const bool one[] = {true};
    CHECK_THROWS_AS(binary_metrics(truth, one), Error);
  }

  TEST_CASE("zero denominators give zero") {
    const auto m = binary_metrics(0, 0, 4, 0);
    CHECK(m.precision == 0.0);
    CHECK(m.recall == 0.0);
    CHECK(m.f1 == 0.0);
    CHECK(m.accuracy == 1.0);
  }

  TEST_CASE("binary identities over random confusions") {
    Rng rng(2024);
    for (int i = 0; i < 2000; ++i) {
      const auto tp = static_cast<std::size_t>(rng.range(0, 50));
      const auto fp = static_cast<std::size_t>(rng.range(0, 50));
      const auto tn = static_cast<std::size_t>(rng.range(0, 50));
      const auto fn = static_cast<std::size_t>(rng.range(0, 50));
      const auto m = binary_metrics(tp, fp, tn, fn);
      const double total = static_cast<double>(tp + fp + tn + fn);
      if (total > 0) CHECK(m.accuracy == static_cast<double>(tp + tn) / total);
      if (tp + fp > 0) CHECK(m.precision == static_cast<double>(tp) / static_cast<double>(tp + fp));
      if (tp + fn > 0) CHECK(m.recall == static_cast<double>(tp) / static_cast<double>(tp + fn));
      if (m.precision + m.recall > 0) {
        CHECK(m.f1 == doctest::Approx(2 * m.precision * m.recall / (m.precision + m.recall)).epsilon(1e-12));
      }
      for (const double v : {m.accuracy, m.precision, m.recall, m.f1}) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
      }
    }
  }

  TEST_CASE("multiclass fixture [[2,0],[1,1]]") {
    const BugType A = BugType::Crash;
    const BugType B = BugType::NullScreen;
    const BugType C = BugType::ErrorPrompt;
    const std::vector<BugType> truth = {A, A, B, B};
    const std::vector<TopKPrediction> pred = {ranked(A, B, C), ranked(A, B, C), ranked(A, B, C), ranked(B, A, C)};
    const auto m = multiclass_metrics(truth, pred, 1);
    CHECK(m.accuracy == 0.75);
    CHECK(m.macro_precision == doctest::Approx((2.0 / 3.0 + 1.0) / 2.0).epsilon(1e-15));
    CHECK(m.per_class.at(A).precision == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(m.per_class.at(B).recall == 0.5);
    CHECK(m.confusion[index_of(A)][index_of(A)] == 2);
    CHECK(m.confusion[index_of(B)][index_of(A)] == 1);
    CHECK(m.confusion[index_of(B)][index_of(B)] == 1);
    const auto from_conf = metrics_from_confusion(m.confusion);
    CHECK(from_conf.accuracy == m.accuracy);
    CHECK(from_conf.macro_precision == m.macro_precision);
    CHECK(from_conf.macro_recall == m.macro_recall);
  }

  TEST_CASE("perfect predictor") {
    std::vector<BugType> truth;
    std::vector<TopKPrediction> pred;
    for (const auto t : kAllBugTypes) {
      truth.push_back(t);
      const auto other = t == BugType::Crash ? BugType::NullScreen : BugType::Crash;
      const auto third = t == BugType::ErrorPrompt ? BugType::GarbledError : BugType::ErrorPrompt;
      pred.push_back(ranked(t, other == t ? BugType::LayoutProblem : other,
                            third == t || third == other ? BugType::DisplayProblem : third));
    }
    for (int k = 1; k <= 3; ++k) {
      const auto m = multiclass_metrics(truth, pred, k);
      CHECK(m.accuracy == 1.0);
      CHECK(m.macro_precision == 1.0);
      CHECK(m.macro_recall == 1.0);
      CHECK(m.macro_f1 == 1.0);
    }
  }

  TEST_CASE("truth always third: top-3 hit, top-1 miss") {
    std::vector<BugType> truth;
    std::vector<TopKPrediction> pred;
    for (std::size_t i = 0; i < kBugTypeCount; ++i) {
      const BugType t = kAllBugTypes[i];
      truth.push_back(t);
      pred.push_back(ranked(kAllBugTypes[(i + 1) % 10], kAllBugTypes[(i + 2) % 10], t));
    }
    CHECK(multiclass_metrics(truth, pred, 1).accuracy == 0.0);
    CHECK(multiclass_metrics(truth, pred, 2).accuracy == 0.0);
    CHECK(multiclass_metrics(truth, pred, 3).accuracy == 1.0);
  }

  TEST_CASE("top-k accuracy is monotone in k") {
    Rng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<BugType> truth;
      std::vector<TopKPrediction> pred;
      for (int i = 0; i < 30; ++i) {
        std::vector<BugType> types(kAllBugTypes.begin(), kAllBugTypes.end());
        rng.shuffle(types);
        pred.push_back(ranked(types[0], types[1], types[2]));
        truth.push_back(kAllBugTypes[rng.index(10)]);
      }
      const double a1 = multiclass_metrics(truth, pred, 1).accuracy;
      const double a2 = multiclass_metrics(truth, pred, 2).accuracy;
      const double a3 = multiclass_metrics(truth, pred, 3).accuracy;
      CHECK(a1 <= a2);
      CHECK(a2 <= a3);
    }
  }

  TEST_CASE("argument errors") {
    CHECK_THROWS_AS(multiclass_metrics({}, {}, 1), Error);
    const std::vector<BugType> truth = {BugType::Crash};
    const std::vector<TopKPrediction> pred = {ranked(BugType::Crash, BugType::NullScreen, BugType::ErrorPrompt)};
    CHECK_THROWS_AS(multiclass_metrics(truth, pred, 0), Error);
    CHECK_THROWS_AS(multiclass_metrics(truth, pred, 4), Error);
  }
}
