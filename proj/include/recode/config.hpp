#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "recode/detector.hpp"

namespace recode {

/// Everything one pipeline run needs besides its inputs. Backend selectors
/// are "baseline" / "sidecar" / "heuristic" or "plugin:<command line>".
struct PipelineConfig {
  DetectorConfig detector;
  std::optional<std::filesystem::path> lexicon_dir;
  std::optional<std::filesystem::path> model_path;
  std::string classifier = "baseline";
  std::string ocr = "sidecar";
  std::string widget_typer = "heuristic";
  bool plugin_fallback = true;  // a dead classifier plugin degrades to the baseline
  double smoothing = 1.0;
};

/// Unknown keys are rejected. Missing keys keep their defaults.
PipelineConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PipelineConfig& cfg);
PipelineConfig load_config(const std::filesystem::path& path);

/// The command after "plugin:", or nullopt for a built-in selector.
std::optional<std::string> plugin_command(std::string_view selector);

}  // namespace recode
