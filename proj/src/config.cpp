#include "recode/config.hpp"

#include <set>

#include "recode/text_util.hpp"

namespace recode {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, std::string_view where, std::initializer_list<std::string_view> known) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, std::string(where) + " must be an object");
  const std::set<std::string_view> allowed(known);
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) throw Error(ErrorCode::InvalidArgument, "unknown config key " + std::string(where) + "." + key);
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void check_selector(const std::string& value, std::string_view builtin, std::string_view key) {
  if (value != builtin && !plugin_command(value)) {
    throw Error(ErrorCode::InvalidArgument,
                std::string(key) + " must be \"" + std::string(builtin) + "\" or \"plugin:<command>\"");
  }
}

}  // namespace

std::optional<std::string> plugin_command(std::string_view selector) {
  constexpr std::string_view prefix = "plugin:";
  if (selector.substr(0, prefix.size()) != prefix) return std::nullopt;
  std::string cmd = trim(selector.substr(prefix.size()));
  if (cmd.empty()) return std::nullopt;
  return cmd;
}

PipelineConfig config_from_json(const json& j) {
  PipelineConfig cfg;
  try {
    reject_unknown(j, "config",
                   {"fusion", "weights", "decomposer", "text", "crash_fullscreen_fallback", "lexicons", "model",
                    "classifier", "ocr", "widget_typer", "plugin_fallback", "smoothing"});
    auto& d = cfg.detector;
    if (j.contains("fusion")) {
      const auto& f = j["fusion"];
      reject_unknown(f, "fusion", {"delta", "lambda", "theta"});
      if (f.contains("delta")) {
        const auto delta = f["delta"].get<std::vector<double>>();
        if (delta.size() != 3) throw Error(ErrorCode::InvalidArgument, "fusion.delta needs three values");
        d.fusion.delta = {delta[0], delta[1], delta[2]};
      }
      read(f, "lambda", d.fusion.lambda);
      read(f, "theta", d.fusion.theta);
    }
    if (j.contains("weights")) {
      const auto& w = j["weights"];
      reject_unknown(w, "weights", {"color", "position", "text", "type"});
      read(w, "color", d.weights.omega_c);
      read(w, "position", d.weights.omega_p);
      read(w, "text", d.weights.omega_x);
      read(w, "type", d.weights.omega_y);
    }
    if (j.contains("decomposer")) {
      const auto& c = j["decomposer"];
      reject_unknown(c, "decomposer",
                     {"gradient_threshold", "merge_overlap", "merge_gap", "min_widget_size", "popup_min_width",
                      "popup_max_width", "popup_min_height", "popup_max_height", "popup_min_contrast",
                      "icon_max_distance"});
      auto& dc = d.decomposer;
      read(c, "gradient_threshold", dc.gradient_threshold);
      read(c, "merge_overlap", dc.merge_overlap);
      read(c, "merge_gap", dc.merge_gap);
      read(c, "min_widget_size", dc.min_widget_size);
      read(c, "popup_min_width", dc.popup_min_width);
      read(c, "popup_max_width", dc.popup_max_width);
      read(c, "popup_min_height", dc.popup_min_height);
      read(c, "popup_max_height", dc.popup_max_height);
      read(c, "popup_min_contrast", dc.popup_min_contrast);
      read(c, "icon_max_distance", dc.icon_max_distance);
    }
    if (j.contains("text")) {
      reject_unknown(j["text"], "text", {"attach_window"});
      read(j["text"], "attach_window", d.text.attach_window);
    }
    read(j, "crash_fullscreen_fallback", d.crash_fullscreen_fallback);
    if (j.contains("lexicons") && !j["lexicons"].is_null()) cfg.lexicon_dir = j["lexicons"].get<std::string>();
    if (j.contains("model") && !j["model"].is_null()) cfg.model_path = j["model"].get<std::string>();
    read(j, "classifier", cfg.classifier);
    read(j, "ocr", cfg.ocr);
    read(j, "widget_typer", cfg.widget_typer);
    read(j, "plugin_fallback", cfg.plugin_fallback);
    read(j, "smoothing", cfg.smoothing);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("config: ") + e.what());
  }
  check_selector(cfg.classifier, "baseline", "classifier");
  check_selector(cfg.ocr, "sidecar", "ocr");
  check_selector(cfg.widget_typer, "heuristic", "widget_typer");
  cfg.detector.fusion.validate();
  cfg.detector.weights.validate();
  if (cfg.detector.text.attach_window < 0) throw Error(ErrorCode::InvalidArgument, "text.attach_window must be >= 0");
  if (!(cfg.smoothing > 0.0)) throw Error(ErrorCode::InvalidArgument, "smoothing must be positive");
  return cfg;
}

json to_json(const PipelineConfig& cfg) {
  const auto& d = cfg.detector;
  const auto& dc = d.decomposer;
  return {{"fusion", {{"delta", d.fusion.delta}, {"lambda", d.fusion.lambda}, {"theta", d.fusion.theta}}},
          {"weights",
           {{"color", d.weights.omega_c},
            {"position", d.weights.omega_p},
            {"text", d.weights.omega_x},
            {"type", d.weights.omega_y}}},
          {"decomposer",
           {{"gradient_threshold", dc.gradient_threshold},
            {"merge_overlap", dc.merge_overlap},
            {"merge_gap", dc.merge_gap},
            {"min_widget_size", dc.min_widget_size},
            {"popup_min_width", dc.popup_min_width},
            {"popup_max_width", dc.popup_max_width},
            {"popup_min_height", dc.popup_min_height},
            {"popup_max_height", dc.popup_max_height},
            {"popup_min_contrast", dc.popup_min_contrast},
            {"icon_max_distance", dc.icon_max_distance}}},
          {"text", {{"attach_window", d.text.attach_window}}},
          {"crash_fullscreen_fallback", d.crash_fullscreen_fallback},
          {"lexicons", cfg.lexicon_dir ? json(cfg.lexicon_dir->string()) : json()},
          {"model", cfg.model_path ? json(cfg.model_path->string()) : json()},
          {"classifier", cfg.classifier},
          {"ocr", cfg.ocr},
          {"widget_typer", cfg.widget_typer},
          {"plugin_fallback", cfg.plugin_fallback},
          {"smoothing", cfg.smoothing}};
}

PipelineConfig load_config(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

}  // namespace recode
