#include "recode/harness.hpp"

#include <algorithm>
#include <thread>

#include <omp.h>

#include "recode/plugin.hpp"
#include "recode/report.hpp"
#include "recode/synth.hpp"
#include "recode/text_util.hpp"

namespace recode {

namespace fs = std::filesystem;

namespace {

// Training size for the template baseline; both tiers' templates are seen.
constexpr std::size_t kTemplatePerType = 120;
constexpr std::uint64_t kTemplateSeed = 0x7265636f6465ULL;

std::shared_ptr<PluginProcess> spawn(const std::string& command, const char* protocol) {
  return std::make_shared<PluginProcess>(command, protocol);
}

std::string run_error(const std::exception& e) { return e.what(); }

}  // namespace

BaselineModel template_baseline_model(const LexiconSet& lexicons, double smoothing) {
  const auto corpus = generate_training_corpus(kTemplatePerType, kTemplateSeed, Tier::Noisy);
  return train_baseline(corpus, smoothing, lexicon_phrases(lexicons));
}

Pipeline make_pipeline(const PipelineConfig& cfg) {
  Pipeline p{cfg.lexicon_dir ? load_lexicons(*cfg.lexicon_dir) : default_lexicons(), cfg.detector, nullptr, nullptr,
             nullptr, {}};

  const auto baseline = std::make_shared<BaselineClassifier>(std::make_shared<const BaselineModel>(
      cfg.model_path ? load_model(*cfg.model_path) : template_baseline_model(p.lexicons, cfg.smoothing)));
  if (const auto cmd = plugin_command(cfg.classifier)) {
    try {
      p.classifier = std::make_shared<PluginClassifier>(spawn(*cmd, "recode-classifier"),
                                                        cfg.plugin_fallback ? baseline : nullptr);
    } catch (const Error& e) {
      if (!cfg.plugin_fallback || e.code() != ErrorCode::PluginUnavailable) throw;
      p.warnings.push_back(std::string("classifier plugin unavailable, using baseline: ") + e.what());
      p.classifier = baseline;
    }
  } else if (cfg.classifier == "baseline") {
    p.classifier = baseline;
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown classifier selector '" + cfg.classifier + "'");
  }

  if (const auto cmd = plugin_command(cfg.ocr)) {
    p.ocr = std::make_shared<PluginOcr>(spawn(*cmd, "recode-ocr"));
  } else if (cfg.ocr != "sidecar") {
    throw Error(ErrorCode::InvalidArgument, "unknown OCR selector '" + cfg.ocr + "'");
  }

  if (const auto cmd = plugin_command(cfg.widget_typer)) {
    p.typer = std::make_shared<PluginTyper>(spawn(*cmd, "recode-classifier"));
  } else if (cfg.widget_typer == "heuristic") {
    p.typer = std::make_shared<HeuristicTyper>();
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown widget typer selector '" + cfg.widget_typer + "'");
  }
  return p;
}

std::vector<ReportOutcome> detect_corpus(const fs::path& root, Pipeline& pipeline, int jobs) {
  const auto dirs = list_bundles(root);
  std::vector<ReportOutcome> out(dirs.size());
  const int threads = jobs > 0 ? jobs : std::max(1, omp_get_num_procs());
  const auto n = static_cast<std::ptrdiff_t>(dirs.size());
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    auto& o = out[static_cast<std::size_t>(i)];
    o.report_id = dirs[static_cast<std::size_t>(i)].filename().string();
    try {
      const TestReport report = load_report(dirs[static_cast<std::size_t>(i)]);
      o.truth = report.ground_truth;
      DetectorBackends backends{*pipeline.classifier, pipeline.ocr.get(), pipeline.typer.get()};
      o.record = detect(report, backends, pipeline.lexicons, pipeline.detector);
    } catch (const std::exception& e) {
      o.error = run_error(e);
    }
  }
  std::sort(out.begin(), out.end(), [](const ReportOutcome& a, const ReportOutcome& b) { return a.report_id < b.report_id; });
  return out;
}

BinaryMetrics metrics_from_outcomes(std::span<const ReportOutcome> outcomes) {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (const auto& o : outcomes) {
    if (!o.truth || !o.truth->consistent) throw Error(ErrorCode::UnlabeledReport, o.report_id);
    if (!o.record) throw Error(ErrorCode::InvalidArgument, o.report_id + ": " + o.error.value_or("no result"));
    const bool truth = *o.truth->consistent;
    const bool pred = o.record->verdict.consistent;
    if (truth && pred) ++tp;
    else if (!truth && pred) ++fp;
    else if (!truth && !pred) ++tn;
    else ++fn;
  }
  return binary_metrics(tp, fp, tn, fn);
}

BinaryMetrics evaluate_detector(const fs::path& root, Pipeline& pipeline, int jobs, std::vector<ReportOutcome>* outcomes) {
  for (const auto& dir : list_bundles(root)) {
    const fs::path manifest = dir / kManifestFile;
    if (!fs::exists(manifest)) throw Error(ErrorCode::UnlabeledReport, dir.filename().string() + ": no manifest");
    const auto truth = manifest_from_json(nlohmann::json::parse(read_text_file(manifest), nullptr, false));
    if (!truth.consistent) throw Error(ErrorCode::UnlabeledReport, dir.filename().string() + ": no consistency label");
  }
  auto results = detect_corpus(root, pipeline, jobs);
  const BinaryMetrics m = metrics_from_outcomes(results);
  if (outcomes != nullptr) *outcomes = std::move(results);
  return m;
}

std::string results_csv_header() {
  return "report_id,top1_type,top1_conf,top2_type,top2_conf,top3_type,top3_conf,s_dt_top1,s_dt_top2,s_dt_top3,s_star,"
         "verdict";
}

std::string results_csv_row(const DetectionRecord& r) {
  std::string row = r.report_id;
  for (const auto& e : r.top3.entries()) row += "," + std::string(to_string(e.type)) + "," + format_fixed(e.confidence, 4);
  for (const auto& e : r.top3.entries()) row += "," + format_fixed(r.verdict.per_type_scores.at(e.type), 4);
  row += "," + format_fixed(r.verdict.s_star, 4);
  row += r.verdict.consistent ? ",consistent" : ",inconsistent";
  return row;
}

fs::path trace_path_for(const fs::path& csv_path) {
  fs::path p = csv_path;
  p.replace_extension(".trace.json");
  return p;
}

void write_results(std::span<const ReportOutcome> outcomes, const fs::path& csv_path) {
  std::vector<const ReportOutcome*> sorted;
  for (const auto& o : outcomes) sorted.push_back(&o);
  std::sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) { return a->report_id < b->report_id; });

  std::string csv = results_csv_header() + "\n";
  nlohmann::json trace = nlohmann::json::object();
  for (const auto* o : sorted) {
    if (o->record) {
      csv += results_csv_row(*o->record) + "\n";
      trace[o->report_id] = to_json(*o->record);
    } else {
      csv += o->report_id + ",,,,,,,,,,,error\n";
      trace[o->report_id] = {{"report_id", o->report_id}, {"verdict", "error"}, {"error", o->error.value_or("")}};
    }
  }
  if (csv_path.has_parent_path()) fs::create_directories(csv_path.parent_path());
  write_text_file(csv_path, csv);
  write_text_file(trace_path_for(csv_path), trace.dump(2) + "\n");
}

void write_results(std::span<const DetectionRecord> records, const fs::path& csv_path) {
  std::vector<ReportOutcome> outcomes;
  outcomes.reserve(records.size());
  for (const auto& r : records) outcomes.push_back({r.report_id, r, std::nullopt, std::nullopt});
  write_results(outcomes, csv_path);
}

}  // namespace recode
