#pragma once

// Corpus-level runs: backend wiring, batch detection, evaluation, results.

#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "recode/classifier.hpp"
#include "recode/config.hpp"
#include "recode/detector.hpp"
#include "recode/lexicon.hpp"
#include "recode/metrics.hpp"
#include "recode/screen.hpp"

namespace recode {

/// Backends and settings resolved from a PipelineConfig.
struct Pipeline {
  LexiconSet lexicons;
  DetectorConfig detector;
  std::shared_ptr<Classifier> classifier;
  std::shared_ptr<OcrBackend> ocr;  // null: sidecar texts only
  std::shared_ptr<WidgetTyper> typer;
  std::vector<std::string> warnings;
};

/// Baseline trained on the synthetic generator's description templates;
/// used when no model file is configured.
BaselineModel template_baseline_model(const LexiconSet& lexicons, double smoothing = 1.0);

Pipeline make_pipeline(const PipelineConfig& cfg);

/// One bundle's result; exactly one of record / error is set.
struct ReportOutcome {
  std::string report_id;
  std::optional<DetectionRecord> record;
  std::optional<std::string> error;
  std::optional<GroundTruth> truth;
};

/// Runs detect over every bundle under `root`, `jobs` workers (0 = all
/// cores). Outcomes are sorted by report id and independent of `jobs`.
std::vector<ReportOutcome> detect_corpus(const std::filesystem::path& root, Pipeline& pipeline, int jobs = 0);

/// Positive class = consistent. Raises UnlabeledReport if any bundle lacks
/// a consistency label, before running anything.
BinaryMetrics evaluate_detector(const std::filesystem::path& root, Pipeline& pipeline, int jobs = 0,
                                std::vector<ReportOutcome>* outcomes = nullptr);
/// Metrics over already computed outcomes; failed reports raise.
BinaryMetrics metrics_from_outcomes(std::span<const ReportOutcome> outcomes);

std::string results_csv_header();
std::string results_csv_row(const DetectionRecord& record);

/// Trace file written next to a results CSV: `results.csv` -> `results.trace.json`.
std::filesystem::path trace_path_for(const std::filesystem::path& csv_path);

/// CSV plus trace JSON; rows sorted by report id. Failed reports get
/// verdict `error` and empty numeric fields.
void write_results(std::span<const ReportOutcome> outcomes, const std::filesystem::path& csv_path);
void write_results(std::span<const DetectionRecord> records, const std::filesystem::path& csv_path);

}  // namespace recode
