#include <doctest.h>

#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "recode/harness.hpp"
#include "recode/screen.hpp"
#include "recode/synth.hpp"
#include "support.hpp"

using namespace recode;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

/// Every file under `root` keyed by relative path.
std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = slurp(e.path());
  }
  return out;
}

DetectionRecord record(std::string id, double s0, double s1, double s2) {
  const TopKPrediction top({RankedType{BugType::Crash, 0.7}, RankedType{BugType::NullScreen, 0.2},
                            RankedType{BugType::ErrorPrompt, 0.1}});
  const auto v = fuse(top, {{BugType::Crash, s0}, {BugType::NullScreen, s1}, {BugType::ErrorPrompt, s2}}, {});
  return DetectionRecord{std::move(id), top, v, nlohmann::json::object()};
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("generator is deterministic per seed") {
    testing::TempDir a("gen-a");
    testing::TempDir b("gen-b");
    CorpusSpec spec;
    spec.n_reports = 10;
    spec.seed = 7;
    generate_corpus(spec, a.path());
    generate_corpus(spec, b.path());
    const auto sa = snapshot(a.path());
    CHECK(sa.size() >= 40);
    CHECK(sa == snapshot(b.path()));
    spec.seed = 8;
    testing::TempDir c("gen-c");
    generate_corpus(spec, c.path());
    CHECK(sa != snapshot(c.path()));
  }

  TEST_CASE("single reports match the batch") {
    CorpusSpec spec;
    spec.n_reports = 12;
    spec.seed = 3;
    spec.tier = Tier::Noisy;
    const auto all = generate_reports(spec);
    for (std::size_t i = 0; i < all.size(); ++i) {
      const auto one = generate_report(spec, i);
      CHECK(one.report == all[i].report);
      CHECK(one.consistent == all[i].consistent);
    }
  }

  TEST_CASE("consistent null-screen reports are mostly blank") {
    CorpusSpec spec;
    spec.n_reports = 60;
    spec.seed = 9;
    spec.per_type_mix = {{BugType::NullScreen, 1.0}};
    spec.consistent_fraction = 1.0;
    for (const auto& g : generate_reports(spec)) {
      CHECK(g.consistent);
      CHECK(oracle::blank_ratio(binarize(g.report.screenshot)) >= 0.75);
    }
  }

  TEST_CASE("consistent fraction is honoured") {
    CorpusSpec spec;
    spec.n_reports = 2000;
    spec.seed = 12;
    spec.consistent_fraction = 0.1807;
    std::size_t n = 0;
    for (std::size_t i = 0; i < spec.n_reports; ++i) n += generate_report(spec, i).consistent ? 1 : 0;
    CHECK(static_cast<double>(n) / 2000.0 == doctest::Approx(0.1807).epsilon(0.02 / 0.1807));
  }

  TEST_CASE("generated corpora validate cleanly") {
    testing::TempDir d("gen-valid");
    CorpusSpec spec;
    spec.n_reports = 30;
    spec.seed = 2;
    spec.tier = Tier::Noisy;
    generate_corpus(spec, d.path());
    const auto v = validate_corpus(d.path());
    CHECK(v.size() == 30);
    for (const auto& r : v) CHECK_MESSAGE(r.issues.empty(), r.report_id);
  }

  TEST_CASE("invalid corpus specs") {
    CorpusSpec spec;
    spec.n_reports = 0;
    CHECK_THROWS_AS(spec.validate(), Error);
    spec = {};
    spec.consistent_fraction = 1.5;
    CHECK_THROWS_AS(spec.validate(), Error);
    spec = {};
    spec.per_type_mix = {{BugType::Crash, 0.0}};
    CHECK_THROWS_AS(spec.validate(), Error);
  }

  TEST_CASE("evaluation needs labels") {
    testing::TempDir d("unlabeled");
    CorpusSpec spec;
    spec.n_reports = 3;
    generate_corpus(spec, d.path());
    fs::remove(d.path() / "r00001" / kManifestFile);
    auto pipeline = make_pipeline({});
    try {
      (void)evaluate_detector(d.path(), pipeline, 1);
      FAIL("expected UnlabeledReport");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::UnlabeledReport);
    }
  }

  TEST_CASE("results csv") {
    testing::TempDir d("csv");
    const std::vector<DetectionRecord> recs = {record("b", 0.4, 0.6, 0.0), record("a", 0.0, 0.0, 0.0)};
    write_results(recs, d / "results.csv");
    const auto csv = slurp(d / "results.csv");
    CHECK(count_lines(csv) == 3);
    CHECK(csv.rfind(results_csv_header() + "\n", 0) == 0);
    CHECK(csv.find("\na,") < csv.find("\nb,"));
    CHECK(csv.find("0.5400,consistent\n") != std::string::npos);
    CHECK(csv.find("0.0000,inconsistent\n") != std::string::npos);
    const auto trace = nlohmann::json::parse(slurp(d / "results.trace.json"));
    CHECK(trace.contains("a"));
    CHECK(trace.contains("b"));

    write_results(std::vector<DetectionRecord>{}, d / "empty.csv");
    CHECK(slurp(d / "empty.csv") == results_csv_header() + "\n");

    std::vector<ReportOutcome> outcomes(1);
    outcomes[0].report_id = "bad";
    outcomes[0].error = "MalformedImage";
    write_results(outcomes, d / "err.csv");
    CHECK(slurp(d / "err.csv").find("\nbad,,,,,,,,,,,error\n") != std::string::npos);
    CHECK(trace_path_for("x/out.csv") == fs::path("x/out.trace.json"));
  }

  TEST_CASE("detect_corpus is independent of the worker count") {
    testing::TempDir d("jobs");
    CorpusSpec spec;
    spec.n_reports = 24;
    spec.seed = 5;
    spec.tier = Tier::Noisy;
    generate_corpus(spec, d / "corpus");
    auto pipeline = make_pipeline({});
    const auto one = detect_corpus(d / "corpus", pipeline, 1);
    const auto eight = detect_corpus(d / "corpus", pipeline, 8);
    write_results(one, d / "one.csv");
    write_results(eight, d / "eight.csv");
    CHECK(slurp(d / "one.csv") == slurp(d / "eight.csv"));
    CHECK(slurp(d / "one.trace.json") == slurp(d / "eight.trace.json"));
    const auto m = metrics_from_outcomes(one);
    CHECK(m.tp + m.fp + m.tn + m.fn == 24);
  }

  TEST_CASE("a broken bundle fails alone") {
    testing::TempDir d("broken");
    CorpusSpec spec;
    spec.n_reports = 4;
    generate_corpus(spec, d.path());
    std::ofstream(d.path() / "r00002" / kScreenshotFile, std::ios::binary) << "not a png";
    auto pipeline = make_pipeline({});
    const auto out = detect_corpus(d.path(), pipeline, 2);
    REQUIRE(out.size() == 4);
    CHECK(out[2].error.has_value());
    CHECK_FALSE(out[2].record.has_value());
    for (const std::size_t i : {0u, 1u, 3u}) CHECK(out[i].record.has_value());
    CHECK_THROWS_AS(metrics_from_outcomes(out), Error);
  }

  TEST_CASE("plugin classifier falls back to the baseline") {
    PipelineConfig cfg;
    cfg.classifier = "plugin:" + testing::plugin_cmd("bad-handshake");
    const auto p = make_pipeline(cfg);
    CHECK(p.classifier->name() == "baseline");
    CHECK_FALSE(p.warnings.empty());
    cfg.plugin_fallback = false;
    CHECK_THROWS_AS(make_pipeline(cfg), Error);
  }

  TEST_CASE("config json") {
    const auto cfg = config_from_json(nlohmann::json::parse(R"({"classifier":"baseline","fusion":{"lambda":0.6}})"));
    CHECK(cfg.detector.fusion.lambda == 0.6);
    const auto back = config_from_json(to_json(cfg));
    CHECK(back.detector.fusion.lambda == 0.6);
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"lamda":0.6})")), Error);
    CHECK(plugin_command("plugin:python3 x.py") == "python3 x.py");
    CHECK_FALSE(plugin_command("baseline").has_value());
  }
}
