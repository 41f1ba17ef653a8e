#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "recode/bug_type.hpp"
#include "recode/error.hpp"
#include "recode/image.hpp"
#include "recode/types.hpp"

namespace recode {

struct GroundTruth {
  std::optional<bool> consistent;
  std::optional<BugType> bug_type;
  friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

struct TestReport {
  std::string id;
  std::string description;
  RgbImage screenshot;
  std::optional<std::vector<TextRegion>> ocr_annotations;
  std::optional<std::vector<WidgetRegion>> widget_annotations;
  std::optional<GroundTruth> ground_truth;
  friend bool operator==(const TestReport&, const TestReport&) = default;
};

struct RankedType {
  BugType type;
  double confidence;
  friend bool operator==(const RankedType&, const RankedType&) = default;
};

/// Exactly three distinct bug types with non-increasing confidences.
class TopKPrediction {
 public:
  static constexpr std::size_t kSize = 3;

  explicit TopKPrediction(std::array<RankedType, kSize> entries);

  const std::array<RankedType, kSize>& entries() const { return entries_; }
  const RankedType& operator[](std::size_t i) const { return entries_[i]; }

  friend bool operator==(const TopKPrediction&, const TopKPrediction&) = default;

 private:
  std::array<RankedType, kSize> entries_;
};

struct Verdict {
  bool consistent = false;
  double s_star = 0.0;
  std::map<BugType, double> per_type_scores;
};

// Bundle file names.
inline constexpr const char* kDescriptionFile = "description.txt";
inline constexpr const char* kScreenshotFile = "screenshot.png";
inline constexpr const char* kOcrFile = "ocr.json";
inline constexpr const char* kWidgetsFile = "widgets.json";
inline constexpr const char* kManifestFile = "manifest.json";

TestReport load_report(const std::filesystem::path& bundle_dir);

/// Writes a bundle directory; the inverse of load_report.
void write_report(const std::filesystem::path& bundle_dir, const TestReport& report);

nlohmann::json manifest_to_json(const GroundTruth& truth);
GroundTruth manifest_from_json(const nlohmann::json& j);
nlohmann::json ocr_to_json(const std::vector<TextRegion>& texts);
std::vector<TextRegion> ocr_from_json(const nlohmann::json& j, int width, int height);

struct ReportIssue {
  ErrorCode code;
  std::string message;
};

struct ReportValidation {
  std::string report_id;
  std::vector<ReportIssue> issues;
};

/// Report bundle directories under root, sorted by name.
std::vector<std::filesystem::path> list_bundles(const std::filesystem::path& root);

std::vector<ReportValidation> validate_corpus(const std::filesystem::path& root);

}  // namespace recode
