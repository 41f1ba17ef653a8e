#include "recode/metrics.hpp"

#include <algorithm>
#include <string>

namespace recode {

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double harmonic(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

// Shared tail: per-class and macro scores from effective assignments.
void finish(MulticlassMetrics& m, const ConfusionMatrix& effective, std::size_t hits) {
  m.accuracy = ratio(hits, m.total);
  std::size_t classes = 0;
  for (std::size_t c = 0; c < kBugTypeCount; ++c) {
    std::size_t support = 0;
    std::size_t predicted = 0;
    for (std::size_t j = 0; j < kBugTypeCount; ++j) {
      support += effective[c][j];
      predicted += effective[j][c];
    }
    ClassScores s;
    s.support = support;
    s.precision = ratio(effective[c][c], predicted);
    s.recall = ratio(effective[c][c], support);
    s.f1 = harmonic(s.precision, s.recall);
    if (support > 0 || predicted > 0) m.per_class[kAllBugTypes[c]] = s;
    if (support == 0) continue;
    ++classes;
    m.macro_precision += s.precision;
    m.macro_recall += s.recall;
    m.macro_f1 += s.f1;
  }
  if (classes > 0) {
    m.macro_precision /= static_cast<double>(classes);
    m.macro_recall /= static_cast<double>(classes);
    m.macro_f1 /= static_cast<double>(classes);
  }
}

}  // namespace

BinaryMetrics binary_metrics(std::size_t tp, std::size_t fp, std::size_t tn, std::size_t fn) {
  BinaryMetrics m;
  m.tp = tp;
  m.fp = fp;
  m.tn = tn;
  m.fn = fn;
  m.accuracy = ratio(tp + tn, tp + fp + tn + fn);
  m.precision = ratio(tp, tp + fp);
  m.recall = ratio(tp, tp + fn);
  m.f1 = harmonic(m.precision, m.recall);
  return m;
}

BinaryMetrics binary_metrics(std::span<const bool> truth, std::span<const bool> predicted) {
  if (truth.size() != predicted.size()) throw Error(ErrorCode::InvalidArgument, "label and prediction counts differ");
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (predicted[i]) {
      truth[i] ? ++tp : ++fp;
    } else {
      truth[i] ? ++fn : ++tn;
    }
  }
  return binary_metrics(tp, fp, tn, fn);
}

nlohmann::json to_json(const BinaryMetrics& m) {
  return {{"accuracy", m.accuracy}, {"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1},
          {"tp", m.tp},             {"fp", m.fp},               {"tn", m.tn},         {"fn", m.fn}};
}

MulticlassMetrics multiclass_metrics(std::span<const BugType> truth, std::span<const TopKPrediction> predictions, int k) {
  if (truth.empty()) throw Error(ErrorCode::EmptySet, "no labeled samples");
  if (truth.size() != predictions.size()) throw Error(ErrorCode::InvalidArgument, "label and prediction counts differ");
  if (k < 1 || k > static_cast<int>(TopKPrediction::kSize)) throw Error(ErrorCode::InvalidArgument, "k must be 1, 2 or 3");

  MulticlassMetrics m;
  m.k = k;
  m.total = truth.size();
  ConfusionMatrix effective{};
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto t = index_of(truth[i]);
    const auto top1 = index_of(predictions[i][0].type);
    bool hit = false;
    for (int r = 0; r < k; ++r) hit = hit || predictions[i][static_cast<std::size_t>(r)].type == truth[i];
    if (hit) ++hits;
    ++m.confusion[t][top1];
    ++effective[t][hit ? t : top1];
  }
  finish(m, effective, hits);
  return m;
}

MulticlassMetrics metrics_from_confusion(const ConfusionMatrix& confusion) {
  MulticlassMetrics m;
  m.k = 1;
  m.confusion = confusion;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < kBugTypeCount; ++i) {
    hits += confusion[i][i];
    for (std::size_t j = 0; j < kBugTypeCount; ++j) m.total += confusion[i][j];
  }
  if (m.total == 0) throw Error(ErrorCode::EmptySet, "empty confusion matrix");
  finish(m, confusion, hits);
  return m;
}

nlohmann::json to_json(const MulticlassMetrics& m) {
  nlohmann::json per_class = nlohmann::json::object();
  for (const auto& [type, s] : m.per_class) {
    per_class[std::string(to_string(type))] = {
        {"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}, {"support", s.support}};
  }
  nlohmann::json confusion = nlohmann::json::array();
  for (const auto& row : m.confusion) confusion.push_back(row);
  return {{"k", m.k},
          {"total", m.total},
          {"accuracy", m.accuracy},
          {"macro_precision", m.macro_precision},
          {"macro_recall", m.macro_recall},
          {"macro_f1", m.macro_f1},
          {"per_class", per_class},
          {"confusion", confusion}};
}

}  // namespace recode
