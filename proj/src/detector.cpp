#include "recode/detector.hpp"

#include <algorithm>
#include <cmath>

#include "recode/text_util.hpp"

namespace recode {

namespace {

nlohmann::json box_json(const Box& b) { return {{"x", b.x}, {"y", b.y}, {"w", b.w}, {"h", b.h}}; }

bool text_matches(std::string_view literal, std::string_view screen_text) {
  if (trim(literal).empty() || trim(screen_text).empty()) return false;
  return contains_folded(screen_text, literal) || contains_folded(literal, screen_text);
}

std::vector<const TextRegion*> texts_in(const ScreenDecomposition& screen, const Box& box) {
  std::vector<const TextRegion*> out;
  for (const auto& t : screen.texts) {
    if (box.contains_center_of(t.bbox)) out.push_back(&t);
  }
  return out;
}

bool any_match(std::string_view text, const LexiconSet& lexicons, std::string_view cat) {
  return !match_terms(text, lexicons, cat).empty();
}

nlohmann::json mention_json(const WidgetMention& m) {
  nlohmann::json j = {{"span", {m.head_span.begin, m.head_span.end}}, {"structures", m.structures}};
  j["color"] = m.color ? nlohmann::json(to_string(*m.color)) : nlohmann::json();
  j["position"] = m.position ? nlohmann::json(to_string(*m.position)) : nlohmann::json();
  j["text"] = m.text_literal ? nlohmann::json(*m.text_literal) : nlohmann::json();
  j["type"] = m.type_name ? nlohmann::json(to_string(*m.type_name)) : nlohmann::json();
  return j;
}

}  // namespace

void StrategyWeights::validate() const {
  for (const double w : {omega_c, omega_p, omega_x, omega_y}) {
    if (!(w >= 0.0 && w <= 1.0)) throw Error(ErrorCode::InvalidArgument, "strategy weights must lie in [0,1]");
  }
  if (std::abs(omega_c + omega_p + omega_x + omega_y - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidArgument, "strategy weights must sum to 1");
  }
}

void FusionConfig::validate() const {
  for (const double d : delta) {
    if (!(d > 0.0 && d <= 1.0)) throw Error(ErrorCode::InvalidArgument, "delta values must lie in (0,1]");
  }
  if (!(delta[0] >= delta[1] && delta[1] >= delta[2])) throw Error(ErrorCode::InvalidArgument, "delta must be non-increasing");
  if (!(lambda > 0.0 && lambda < 1.0)) throw Error(ErrorCode::InvalidArgument, "lambda must lie in (0,1)");
  if (!(theta > 0.0 && theta < 1.0)) throw Error(ErrorCode::InvalidArgument, "theta must lie in (0,1)");
}

MentionScore score_mention(const WidgetMention& mention, std::span<const WidgetRegion> widgets,
                           std::span<const TextRegion> texts, const StrategyWeights& w) {
  MentionScore best;
  for (std::size_t i = 0; i < widgets.size(); ++i) {
    const auto& widget = widgets[i];
    MentionScore s;
    s.widget = i;
    s.color = mention.color && *mention.color == widget.color;
    s.position = mention.position && *mention.position == widget.position;
    s.type = mention.type_name && widget.kind && *mention.type_name == *widget.kind;
    if (mention.text_literal) {
      s.text = widget.text && text_matches(*mention.text_literal, *widget.text);
      for (const auto& t : texts) {
        if (s.text) break;
        s.text = widget.bbox.contains_center_of(t.bbox) && text_matches(*mention.text_literal, t.text);
      }
    }
    s.score = (s.color ? w.omega_c : 0.0) + (s.position ? w.omega_p : 0.0) + (s.text ? w.omega_x : 0.0) +
              (s.type ? w.omega_y : 0.0);
    if (!best.widget || s.score > best.score) best = s;
  }
  return best;
}

double general_strategy(std::span<const WidgetMention> mentions, const ScreenDecomposition& screen,
                        const StrategyWeights& w) {
  if (mentions.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& m : mentions) sum += score_mention(m, screen.widgets, screen.texts, w).score;
  return std::clamp(sum / static_cast<double>(mentions.size()), 0.0, 1.0);
}

double crash_strategy(const ScreenDecomposition& screen, const LexiconSet& lexicons, bool fullscreen_fallback) {
  if (screen.popup) {
    for (const auto* t : texts_in(screen, screen.popup->bbox)) {
      if (any_match(t->text, lexicons, category::kCrash)) return 1.0;
    }
    if (screen.popup->text && any_match(*screen.popup->text, lexicons, category::kCrash)) return 1.0;
    return 0.0;
  }
  if (!fullscreen_fallback) return 0.0;
  for (const auto& t : screen.texts) {
    if (any_match(t.text, lexicons, category::kCrash)) return 1.0;
  }
  return 0.0;
}

bool has_http_error_code(std::string_view text) {
  static constexpr std::array<std::string_view, 6> kCodes = {"404", "408", "500", "502", "503", "504"};
  for (const auto code : kCodes) {
    for (std::size_t pos = text.find(code); pos != std::string_view::npos; pos = text.find(code, pos + 1)) {
      const bool left = pos == 0 || !is_ascii_alnum(text[pos - 1]);
      const std::size_t end = pos + code.size();
      const bool right = end == text.size() || !is_ascii_alnum(text[end]);
      if (left && right) return true;
    }
  }
  return false;
}

double network_strategy(const ScreenDecomposition& screen, const TextAnalysis& analysis, const LexiconSet& lexicons) {
  for (const auto& t : screen.texts) {
    if (!has_http_error_code(t.text) && !any_match(t.text, lexicons, category::kNetwork)) continue;
    if (!analysis.prompt_text || contains_folded(t.text, *analysis.prompt_text)) return 1.0;
  }
  return 0.0;
}

double null_screen_strategy(const RgbImage& image, double theta, double gradient_threshold) {
  return max_blank_area_ratio(binarize(image, gradient_threshold)) >= theta ? 1.0 : 0.0;
}

double performance_strategy(const ScreenDecomposition& screen, const LexiconSet& lexicons) {
  if (screen.loading_icon) return 1.0;
  for (const auto& t : screen.texts) {
    if (any_match(t.text, lexicons, category::kPerformance)) return 1.0;
  }
  return 0.0;
}

double error_prompt_strategy(const ScreenDecomposition& screen, const TextAnalysis& analysis) {
  if (!analysis.prompt_text) return 0.0;
  for (const auto& t : screen.texts) {
    if (contains_folded(t.text, *analysis.prompt_text)) return 1.0;
  }
  return 0.0;
}

bool is_garbled_code_point(char32_t cp) {
  if (cp == U'\t' || cp == U'\n') return false;
  if (cp < 0x20 || cp == 0x7F || (cp >= 0x80 && cp <= 0x9F)) return true;
  if (cp >= 0xFFF0 && cp <= 0xFFFF) return true;  // Specials, includes U+FFFD
  if (cp >= 0xE000 && cp <= 0xF8FF) return true;
  if (cp >= 0xF0000 && cp <= 0x10FFFF) return true;  // supplementary private use planes
  return false;
}

double garbled_strategy(const ScreenDecomposition& screen) {
  for (const auto& t : screen.texts) {
    for (const auto& cp : decode_utf8(t.text)) {
      if (is_garbled_code_point(cp.value)) return 1.0;
    }
  }
  return 0.0;
}

double score_type(BugType type, const ScoringInputs& in, nlohmann::json* trace) {
  nlohmann::json t = nlohmann::json::object();
  double score = 0.0;
  if (uses_general_strategy(type)) {
    t["strategy"] = "general";
    nlohmann::json per = nlohmann::json::array();
    double sum = 0.0;
    for (const auto& m : in.analysis.mentions) {
      const auto s = score_mention(m, in.screen.widgets, in.screen.texts, in.cfg.weights);
      sum += s.score;
      per.push_back({{"score", s.score},
                     {"widget", s.widget ? nlohmann::json(*s.widget) : nlohmann::json()},
                     {"color", s.color},
                     {"position", s.position},
                     {"text", s.text},
                     {"type", s.type}});
    }
    score = in.analysis.mentions.empty() ? 0.0 : std::clamp(sum / static_cast<double>(in.analysis.mentions.size()), 0.0, 1.0);
    t["mentions"] = per;
  } else {
    switch (type) {
      case BugType::Crash:
        t["strategy"] = "crash";
        t["popup"] = in.screen.popup.has_value();
        score = crash_strategy(in.screen, in.lexicons, in.cfg.crash_fullscreen_fallback);
        break;
      case BugType::NetworkError:
        t["strategy"] = "network";
        score = network_strategy(in.screen, in.analysis, in.lexicons);
        break;
      case BugType::NullScreen:
        t["strategy"] = "null-screen";
        t["blank_ratio"] = in.screen.blank_ratio;
        score = in.screen.blank_ratio >= in.cfg.fusion.theta ? 1.0 : 0.0;
        break;
      case BugType::PerformanceProblem:
        t["strategy"] = "performance";
        if (in.screen.loading_icon) t["loading_icon"] = in.screen.loading_icon->template_id;
        score = performance_strategy(in.screen, in.lexicons);
        break;
      case BugType::ErrorPrompt:
        t["strategy"] = "error-prompt";
        score = error_prompt_strategy(in.screen, in.analysis);
        break;
      case BugType::GarbledError:
        t["strategy"] = "garbled";
        score = garbled_strategy(in.screen);
        break;
      default:
        break;
    }
  }
  t["score"] = score;
  if (trace != nullptr) *trace = std::move(t);
  return score;
}

Verdict fuse(const TopKPrediction& top3, const std::map<BugType, double>& s_dt, const FusionConfig& cfg) {
  Verdict v;
  for (std::size_t i = 0; i < TopKPrediction::kSize; ++i) {
    const auto type = top3[i].type;
    const auto it = s_dt.find(type);
    if (it == s_dt.end()) throw Error(ErrorCode::MissingScore, "no score for " + std::string(to_string(type)));
    v.per_type_scores[type] = it->second;
    v.s_star = std::max(v.s_star, cfg.delta[i] * it->second);
  }
  v.consistent = v.s_star >= cfg.lambda;
  return v;
}

nlohmann::json to_json(const DetectionRecord& record) {
  nlohmann::json top = nlohmann::json::array();
  nlohmann::json s_dt = nlohmann::json::object();
  for (const auto& e : record.top3.entries()) {
    top.push_back({{"type", to_string(e.type)}, {"confidence", e.confidence}});
    s_dt[std::string(to_string(e.type))] = record.verdict.per_type_scores.at(e.type);
  }
  return {{"report_id", record.report_id},
          {"top3", top},
          {"s_dt", s_dt},
          {"s_star", record.verdict.s_star},
          {"verdict", record.verdict.consistent ? "consistent" : "inconsistent"},
          {"trace", record.trace}};
}

DetectionRecord detect(const TestReport& report, DetectorBackends backends, const LexiconSet& lexicons,
                       const DetectorConfig& cfg) {
  const TopKPrediction top3 = backends.classifier.predict(report.description);
  const TextAnalysis analysis = analyze_text(report.description, lexicons, cfg.text);

  SidecarOcr sidecar(report.ocr_annotations.value_or(std::vector<TextRegion>{}));
  OcrBackend& ocr = report.ocr_annotations || backends.ocr == nullptr ? static_cast<OcrBackend&>(sidecar) : *backends.ocr;
  HeuristicTyper heuristic;
  WidgetTyper& typer = backends.typer != nullptr ? *backends.typer : static_cast<WidgetTyper&>(heuristic);
  const ScreenDecomposition screen =
      decompose_screen(report.screenshot, ocr, typer, lexicons, cfg.decomposer, report.widget_annotations);

  const ScoringInputs inputs{screen, analysis, lexicons, cfg};
  std::map<BugType, double> s_dt;
  nlohmann::json strategies = nlohmann::json::object();
  for (const auto& e : top3.entries()) {
    nlohmann::json t;
    s_dt[e.type] = score_type(e.type, inputs, &t);
    strategies[std::string(to_string(e.type))] = std::move(t);
  }
  Verdict verdict = fuse(top3, s_dt, cfg.fusion);

  nlohmann::json mentions = nlohmann::json::array();
  for (const auto& m : analysis.mentions) mentions.push_back(mention_json(m));
  nlohmann::json trace = {
      {"classifier", backends.classifier.name()},
      {"polarity", to_string(analysis.polarity)},
      {"prompt_text", analysis.prompt_text ? nlohmann::json(*analysis.prompt_text) : nlohmann::json()},
      {"mentions", mentions},
      {"screen",
       {{"widgets", screen.widgets.size()},
        {"texts", screen.texts.size()},
        {"layout_edges", screen.layout.edges.size()},
        {"blank_ratio", screen.blank_ratio},
        {"popup", screen.popup ? box_json(screen.popup->bbox) : nlohmann::json()},
        {"loading_icon", screen.loading_icon ? nlohmann::json(screen.loading_icon->template_id) : nlohmann::json()}}},
      {"strategies", strategies},
      {"warnings", screen.warnings}};
  return DetectionRecord{report.id, top3, std::move(verdict), std::move(trace)};
}

}  // namespace recode
