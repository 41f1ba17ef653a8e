#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>

#include <json.hpp>

#include "recode/bug_type.hpp"
#include "recode/classifier.hpp"
#include "recode/lexicon.hpp"
#include "recode/report.hpp"
#include "recode/screen.hpp"
#include "recode/text_analysis.hpp"

namespace recode {

struct StrategyWeights {
  double omega_c = 0.15;
  double omega_p = 0.20;
  double omega_x = 0.45;
  double omega_y = 0.20;
  /// Throws InvalidArgument unless each weight is in [0,1] and they sum to 1.
  void validate() const;
};

struct FusionConfig {
  std::array<double, 3> delta{1.0, 0.9, 0.8};
  double lambda = 0.5;
  double theta = 0.75;
  void validate() const;
};

struct DetectorConfig {
  FusionConfig fusion;
  StrategyWeights weights;
  DecomposerConfig decomposer;
  TextDecomposerConfig text;
  bool crash_fullscreen_fallback = true;
};

// ---- strategies -------------------------------------------------------

/// Best single-widget weighted feature match for one mention.
struct MentionScore {
  double score = 0.0;
  std::optional<std::size_t> widget;
  bool color = false;
  bool position = false;
  bool text = false;
  bool type = false;
};

MentionScore score_mention(const WidgetMention& mention, std::span<const WidgetRegion> widgets,
                           std::span<const TextRegion> texts, const StrategyWeights& w);
double general_strategy(std::span<const WidgetMention> mentions, const ScreenDecomposition& screen,
                        const StrategyWeights& w);
double crash_strategy(const ScreenDecomposition& screen, const LexiconSet& lexicons, bool fullscreen_fallback = true);
double network_strategy(const ScreenDecomposition& screen, const TextAnalysis& analysis, const LexiconSet& lexicons);
double null_screen_strategy(const RgbImage& image, double theta,
                            double gradient_threshold = kernels::kDefaultGradientThreshold);
double performance_strategy(const ScreenDecomposition& screen, const LexiconSet& lexicons);
double error_prompt_strategy(const ScreenDecomposition& screen, const TextAnalysis& analysis);
double garbled_strategy(const ScreenDecomposition& screen);

/// U+FFFD, C0/C1 controls other than tab and newline, the Specials block
/// and the Private Use Area.
bool is_garbled_code_point(char32_t cp);
/// HTTP error status code (404, 408, 500, 502, 503, 504) as a standalone number.
bool has_http_error_code(std::string_view text);

struct ScoringInputs {
  const ScreenDecomposition& screen;
  const TextAnalysis& analysis;
  const LexiconSet& lexicons;
  const DetectorConfig& cfg;
};

/// S_dt for one bug type. `trace`, when given, receives the strategy details.
double score_type(BugType type, const ScoringInputs& in, nlohmann::json* trace = nullptr);

/// S* = max_i delta_i * s_dt(top_i); consistent iff S* >= lambda.
/// Throws MissingScore when a predicted type has no score.
Verdict fuse(const TopKPrediction& top3, const std::map<BugType, double>& s_dt, const FusionConfig& cfg);

struct DetectionRecord {
  std::string report_id;
  TopKPrediction top3;
  Verdict verdict;
  nlohmann::json trace;
};

nlohmann::json to_json(const DetectionRecord& record);

/// Backends used when a report carries no OCR sidecar; null means "no OCR".
struct DetectorBackends {
  Classifier& classifier;
  OcrBackend* ocr = nullptr;
  WidgetTyper* typer = nullptr;
};

DetectionRecord detect(const TestReport& report, DetectorBackends backends, const LexiconSet& lexicons,
                       const DetectorConfig& cfg = {});

}  // namespace recode
