#include <doctest.h>

#include "recode/report.hpp"
#include "recode/text_util.hpp"
#include "support.hpp"

using namespace recode;
using testing::TempDir;

namespace {

void make_bundle(const std::filesystem::path& dir, const std::string& desc, int w = 100, int h = 100) {
  std::filesystem::create_directories(dir);
  write_text_file(dir / kDescriptionFile, desc);
  save_png(dir / kScreenshotFile, RgbImage(w, h));
}

}  // namespace

TEST_SUITE("report-model") {
  TEST_CASE("bug type names round-trip in declaration order") {
    for (const auto t : kAllBugTypes) CHECK(parse_bug_type(to_string(t)) == t);
    CHECK(to_string(BugType::FunctionalDefect) == "functional-defect");
    CHECK_FALSE(parse_bug_type("not-a-type").has_value());
    CHECK(uses_general_strategy(BugType::TransitionProblem));
    CHECK_FALSE(uses_general_strategy(BugType::Crash));
  }

  TEST_CASE("load_report maps a minimal bundle") {
    TempDir tmp("report");
    make_bundle(tmp / "r1", "The app crashes.");
    const TestReport r = load_report(tmp / "r1");
    CHECK(r.id == "r1");
    CHECK(r.description == "The app crashes.");
    CHECK(r.screenshot.width() == 100);
    CHECK(r.screenshot.height() == 100);
    CHECK_FALSE(r.ocr_annotations.has_value());
    CHECK_FALSE(r.widget_annotations.has_value());
    CHECK_FALSE(r.ground_truth.has_value());
  }

  TEST_CASE("missing screenshot and description") {
    TempDir tmp("report");
    std::filesystem::create_directories(tmp / "a");
    write_text_file(tmp / "a" / kDescriptionFile, "text");
    try {
      (void)load_report(tmp / "a");
      FAIL("expected MissingFile");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::MissingFile);
    }
    std::filesystem::create_directories(tmp / "b");
    save_png(tmp / "b" / kScreenshotFile, RgbImage(4, 4));
    CHECK_THROWS_AS((void)load_report(tmp / "b"), Error);
  }

  TEST_CASE("empty description is rejected") {
    TempDir tmp("report");
    make_bundle(tmp / "r", "   \n");
    try {
      (void)load_report(tmp / "r");
      FAIL("expected EmptyDescription");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::EmptyDescription);
    }
  }

  TEST_CASE("ocr box outside the image is malformed") {
    TempDir tmp("report");
    make_bundle(tmp / "r", "desc");
    write_text_file(tmp / "r" / kOcrFile, R"({"texts":[{"x":150,"y":0,"w":5,"h":5,"text":"a"}]})");
    try {
      (void)load_report(tmp / "r");
      FAIL("expected MalformedAnnotation");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::MalformedAnnotation);
    }
  }

  TEST_CASE("undecodable png is MalformedImage") {
    TempDir tmp("report");
    std::filesystem::create_directories(tmp / "r");
    write_text_file(tmp / "r" / kDescriptionFile, "desc");
    write_text_file(tmp / "r" / kScreenshotFile, "definitely not a png");
    try {
      (void)load_report(tmp / "r");
      FAIL("expected MalformedImage");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::MalformedImage);
    }
  }

  TEST_CASE("write then load is structurally equal") {
    TempDir tmp("report");
    TestReport r;
    r.id = "x";
    r.description = "After clicking the 'Login' button, nothing happened.";
    r.screenshot = RgbImage(30, 20, {10, 20, 30});
    r.screenshot.fill_rect({2, 2, 10, 5}, {200, 0, 0});
    r.ocr_annotations = std::vector<TextRegion>{{{2, 2, 10, 5}, "Login"}};
    WidgetRegion w;
    w.bbox = {1, 1, 12, 7};
    w.kind = WidgetKind::Button;
    w.text = "Login";
    r.widget_annotations = std::vector<WidgetRegion>{w};
    r.ground_truth = GroundTruth{true, BugType::FunctionalDefect};
    write_report(tmp / "x", r);
    const TestReport back = load_report(tmp / "x");
    CHECK(back.description == r.description);
    CHECK(back.screenshot == r.screenshot);
    CHECK(back.ocr_annotations == r.ocr_annotations);
    CHECK(back.ground_truth == r.ground_truth);
    REQUIRE(back.widget_annotations);
    CHECK(back.widget_annotations->at(0).kind == WidgetKind::Button);
    CHECK(back.widget_annotations->at(0).text == "Login");
    // Reloading the same bytes twice gives equal values.
    CHECK(load_report(tmp / "x") == back);
  }

  TEST_CASE("manifest round-trip, including nulls") {
    for (const GroundTruth& g : {GroundTruth{}, GroundTruth{false, std::nullopt}, GroundTruth{true, BugType::Crash}}) {
      CHECK(manifest_from_json(manifest_to_json(g)) == g);
    }
    CHECK_THROWS_AS(manifest_from_json(nlohmann::json{{"bug_type", "bogus"}}), Error);
  }

  TEST_CASE("TopKPrediction rejects unsorted and duplicate entries") {
    using A = std::array<RankedType, 3>;
    CHECK_NOTHROW(TopKPrediction(A{{{BugType::Crash, 0.5}, {BugType::NullScreen, 0.3}, {BugType::ErrorPrompt, 0.3}}}));
    CHECK_THROWS_AS(TopKPrediction(A{{{BugType::Crash, 0.2}, {BugType::NullScreen, 0.3}, {BugType::ErrorPrompt, 0.1}}}),
                    Error);
    CHECK_THROWS_AS(TopKPrediction(A{{{BugType::Crash, 0.5}, {BugType::Crash, 0.3}, {BugType::ErrorPrompt, 0.1}}}),
                    Error);
    CHECK_THROWS_AS(TopKPrediction(A{{{BugType::Crash, 1.5}, {BugType::NullScreen, 0.3}, {BugType::ErrorPrompt, 0.1}}}),
                    Error);
  }

  TEST_CASE("validate_corpus") {
    TempDir tmp("validate");
    CHECK(validate_corpus(tmp.path()).empty());
    make_bundle(tmp / "a", "one");
    make_bundle(tmp / "b", "two");
    make_bundle(tmp / "c", "three");
    auto v = validate_corpus(tmp.path());
    REQUIRE(v.size() == 3);
    for (const auto& r : v) CHECK(r.issues.empty());
    std::filesystem::remove(tmp / "b" / kDescriptionFile);
    v = validate_corpus(tmp.path());
    REQUIRE(v[1].issues.size() == 1);
    CHECK(v[1].report_id == "b");
    CHECK(v[1].issues[0].code == ErrorCode::MissingFile);
    CHECK_THROWS_AS(validate_corpus(tmp / "nope"), Error);
  }

  TEST_CASE("utf8 helpers") {
    const auto cps = decode_utf8("a\xE7\x99\xBD");
    REQUIRE(cps.size() == 2);
    CHECK(cps[1].value == U'白');
    CHECK(cps[1].length == 3);
    CHECK(encode_utf8(U'白') == "\xE7\x99\xBD");
    CHECK(contains_folded("The LOGIN button", "login"));
    CHECK_FALSE(contains_folded("abc", "abd"));
    CHECK(normalize_whitespace("  a \t b\n") == "a b");
    CHECK(format_fixed(0.54, 4) == "0.5400");
    CHECK(format_fixed(1.0, 4) == "1.0000");
  }
}
