// recode: consistency detection for crowdsourced test reports.
//
// Exit codes: 0 success, 1 fatal (bad flags, config, missing inputs),
// 2 some reports failed (partial results are still written).

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <omp.h>

#include <CLI11.hpp>

#include "recode/augmentor.hpp"
#include "recode/classifier.hpp"
#include "recode/config.hpp"
#include "recode/corpus.hpp"
#include "recode/harness.hpp"
#include "recode/lexicon.hpp"
#include "recode/synth.hpp"
#include "recode/text_util.hpp"

namespace fs = std::filesystem;
using namespace recode;

namespace {

struct SharedFlags {
  std::string config;
  std::string lexicons;
  int jobs = 0;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string corpus;
  std::string model;
  std::string classifier;
  std::string plugin_cmd;
};

PipelineConfig resolve_config(const SharedFlags& f) {
  PipelineConfig cfg = f.config.empty() ? PipelineConfig{} : load_config(f.config);
  if (!f.lexicons.empty()) {
    cfg.lexicon_dir = f.lexicons;
  } else if (!cfg.lexicon_dir) {
    if (const char* env = std::getenv("RECODE_LEXICON_DIR"); env != nullptr && *env != '\0') cfg.lexicon_dir = env;
  }
  if (!f.model.empty()) cfg.model_path = f.model;
  if (f.classifier == "baseline") {
    cfg.classifier = "baseline";
  } else if (f.classifier == "plugin") {
    if (!f.plugin_cmd.empty()) {
      cfg.classifier = "plugin:" + f.plugin_cmd;
    } else if (!plugin_command(cfg.classifier)) {
      throw Error(ErrorCode::InvalidArgument, "--classifier plugin needs --plugin-cmd");
    }
  } else if (!f.plugin_cmd.empty()) {
    cfg.classifier = "plugin:" + f.plugin_cmd;
  }
  return cfg;
}

LexiconSet resolve_lexicons(const SharedFlags& f) {
  const auto cfg = resolve_config(f);
  return cfg.lexicon_dir ? load_lexicons(*cfg.lexicon_dir) : default_lexicons();
}

int jobs_or_default(int jobs) { return jobs > 0 ? jobs : std::max(1, omp_get_num_procs()); }

Pipeline pipeline_for(const SharedFlags& f) {
  Pipeline p = make_pipeline(resolve_config(f));
  for (const auto& w : p.warnings) std::cerr << "warning: " << w << "\n";
  return p;
}

int cmd_detect(const SharedFlags& f) {
  if (f.corpus.empty()) throw Error(ErrorCode::InvalidArgument, "--corpus is required");
  if (!fs::is_directory(f.corpus)) throw Error(ErrorCode::RootNotFound, f.corpus);
  Pipeline p = pipeline_for(f);
  const auto outcomes = detect_corpus(f.corpus, p, f.jobs);
  const fs::path out = f.out.empty() ? fs::path("results.csv") : fs::path(f.out);
  write_results(outcomes, out);
  int failed = 0;
  for (const auto& o : outcomes) {
    if (o.error) {
      std::cerr << o.report_id << ": " << *o.error << "\n";
      ++failed;
    }
  }
  std::cerr << outcomes.size() << " reports, " << failed << " failed; wrote " << out.string() << "\n";
  return failed > 0 ? 2 : 0;
}

int cmd_train(const SharedFlags& f, const std::string& in, double smoothing) {
  if (f.out.empty()) throw Error(ErrorCode::InvalidArgument, "--out is required");
  const LexiconSet lex = resolve_lexicons(f);
  const BaselineModel model =
      in.empty() ? template_baseline_model(lex, smoothing) : train_baseline(read_jsonl(in), smoothing, lexicon_phrases(lex));
  save_model(model, f.out);
  std::cerr << "vocabulary " << model.vocabulary_size() << ", wrote " << f.out << "\n";
  return 0;
}

int cmd_classify(const SharedFlags& f, const std::vector<std::string>& texts, const std::string& in) {
  Pipeline p = pipeline_for(f);
  for (const auto& t : texts) {
    nlohmann::json top = nlohmann::json::array();
    for (const auto& e : p.classifier->predict(t).entries()) {
      top.push_back({{"type", to_string(e.type)}, {"confidence", e.confidence}});
    }
    std::cout << nlohmann::json{{"text", t}, {"top", top}}.dump() << "\n";
  }
  if (!in.empty()) {
    const auto labeled = read_jsonl(in);
    std::cout << nlohmann::json{{"top1", to_json(evaluate_classifier(*p.classifier, labeled, 1))},
                                {"top3", to_json(evaluate_classifier(*p.classifier, labeled, 3))}}
                     .dump(2)
              << "\n";
  }
  return 0;
}

int cmd_augment(const SharedFlags& f, const std::string& in, const std::string& plan_path) {
  if (in.empty() || f.out.empty()) throw Error(ErrorCode::InvalidArgument, "--in and --out are required");
  AugmentationPlan plan =
      plan_path.empty() ? reference_plan() : plan_from_json(nlohmann::json::parse(read_text_file(plan_path)));
  if (f.seed) plan.seed = *f.seed;
  omp_set_num_threads(jobs_or_default(f.jobs));
  const auto result = balance_corpus(read_jsonl(in), plan, resolve_lexicons(f));
  write_jsonl(f.out, result.entries);
  for (const auto& w : result.warnings) std::cerr << to_json(w).dump() << "\n";
  std::cerr << result.entries.size() << " entries written to " << f.out << "\n";
  return 0;
}

int cmd_gen_corpus(const SharedFlags& f, std::size_t n, const std::string& tier, double fraction, int width, int height) {
  if (f.out.empty()) throw Error(ErrorCode::InvalidArgument, "--out is required");
  CorpusSpec spec;
  spec.n_reports = n;
  spec.seed = f.seed.value_or(0);
  spec.consistent_fraction = fraction;
  spec.width = width;
  spec.height = height;
  const auto t = parse_tier(tier);
  if (!t) throw Error(ErrorCode::InvalidArgument, "unknown tier '" + tier + "'");
  spec.tier = *t;
  omp_set_num_threads(jobs_or_default(f.jobs));
  generate_corpus(spec, f.out);
  std::cerr << n << " bundles written to " << f.out << "\n";
  return 0;
}

int cmd_evaluate(const SharedFlags& f) {
  if (f.corpus.empty()) throw Error(ErrorCode::InvalidArgument, "--corpus is required");
  Pipeline p = pipeline_for(f);
  std::vector<ReportOutcome> outcomes;
  const BinaryMetrics m = evaluate_detector(f.corpus, p, f.jobs, &outcomes);
  if (!f.out.empty()) write_results(outcomes, f.out);
  std::cout << to_json(m).dump(2) << "\n";
  return 0;
}

int cmd_validate(const SharedFlags& f) {
  if (f.corpus.empty()) throw Error(ErrorCode::InvalidArgument, "--corpus is required");
  int bad = 0;
  const auto results = validate_corpus(f.corpus);
  for (const auto& r : results) {
    for (const auto& issue : r.issues) {
      std::cout << r.report_id << "\t" << error_code_name(issue.code) << "\t" << issue.message << "\n";
    }
    if (!r.issues.empty()) ++bad;
  }
  std::cerr << results.size() << " bundles, " << bad << " with issues\n";
  return bad > 0 ? 2 : 0;
}

int cmd_export_lexicons(const SharedFlags& f) {
  if (f.out.empty()) throw Error(ErrorCode::InvalidArgument, "--out is required");
  export_lexicons(resolve_lexicons(f), f.out);
  std::cerr << "lexicons written to " << f.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"recode: image-text consistency detection for crowdsourced test reports"};
  app.require_subcommand(1);
  app.fallthrough();

  SharedFlags f;
  std::uint64_t seed = 0;
  app.add_option("--config", f.config, "Pipeline config JSON")->check(CLI::ExistingFile);
  app.add_option("--lexicons", f.lexicons, "Lexicon directory (fallback: RECODE_LEXICON_DIR, then bundled)");
  app.add_option("--jobs", f.jobs, "Worker threads (default: all cores)")->check(CLI::NonNegativeNumber);
  auto* seed_opt = app.add_option("--seed", seed, "Random seed");
  app.add_option("--out", f.out, "Output path");
  app.add_option("--corpus", f.corpus, "Report corpus directory");
  app.add_option("--model", f.model, "Baseline model file (JSON)");
  app.add_option("--classifier", f.classifier, "Classifier backend")->check(CLI::IsMember({"baseline", "plugin"}));
  app.add_option("--plugin-cmd", f.plugin_cmd, "Classifier plugin command line");

  auto* detect = app.add_subcommand("detect", "Detect consistency for every report bundle; writes CSV + trace");

  std::string train_in;
  double smoothing = 1.0;
  auto* train = app.add_subcommand("train", "Train the baseline classifier");
  train->add_option("--in", train_in, "Labeled JSONL corpus (default: generator templates)");
  train->add_option("--smoothing", smoothing, "Additive smoothing")->check(CLI::PositiveNumber);

  std::vector<std::string> texts;
  std::string classify_in;
  auto* classify = app.add_subcommand("classify", "Predict top-3 bug types for descriptions");
  classify->add_option("--text", texts, "Description text (repeatable)");
  classify->add_option("--in", classify_in, "Labeled JSONL corpus to evaluate");

  std::string aug_in;
  std::string plan;
  auto* augment = app.add_subcommand("augment", "Balance a labeled corpus by keyword replacement");
  augment->add_option("--in", aug_in, "Labeled JSONL corpus")->required();
  augment->add_option("--plan", plan, "Plan JSON {\"seed\", \"targets\": {type: n}}");

  std::size_t n = 100;
  std::string tier = "noise-free";
  double fraction = 0.5;
  int width = 240;
  int height = 400;
  auto* gen = app.add_subcommand("gen-corpus", "Generate a synthetic labeled report corpus");
  gen->add_option("--n", n, "Number of reports")->check(CLI::PositiveNumber);
  gen->add_option("--tier", tier, "noise-free or noisy");
  gen->add_option("--consistent-fraction", fraction, "Share of consistent reports")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--width", width, "Screenshot width");
  gen->add_option("--height", height, "Screenshot height");

  auto* evaluate = app.add_subcommand("evaluate", "Detect over a labeled corpus and print binary metrics JSON");
  auto* validate = app.add_subcommand("validate", "Check report bundles without running detection");
  auto* export_lex = app.add_subcommand("export-lexicons", "Write the active lexicon set to a directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  if (seed_opt->count() > 0) f.seed = seed;

  try {
    if (*detect) return cmd_detect(f);
    if (*train) return cmd_train(f, train_in, smoothing);
    if (*classify) return cmd_classify(f, texts, classify_in);
    if (*augment) return cmd_augment(f, aug_in, plan);
    if (*gen) return cmd_gen_corpus(f, n, tier, fraction, width, height);
    if (*evaluate) return cmd_evaluate(f);
    if (*validate) return cmd_validate(f);
    if (*export_lex) return cmd_export_lexicons(f);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
