#include "recode/report.hpp"

#include <algorithm>

#include "recode/screen.hpp"
#include "recode/text_util.hpp"

namespace recode {

namespace fs = std::filesystem;

TopKPrediction::TopKPrediction(std::array<RankedType, kSize> entries) : entries_(entries) {
  for (std::size_t i = 0; i < kSize; ++i) {
    const double c = entries_[i].confidence;
    if (!(c >= 0.0 && c <= 1.0)) throw Error(ErrorCode::InvalidArgument, "confidence outside [0,1]");
    if (i > 0 && c > entries_[i - 1].confidence) {
      throw Error(ErrorCode::InvalidArgument, "top-k confidences must be non-increasing");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (entries_[j].type == entries_[i].type) throw Error(ErrorCode::InvalidArgument, "duplicate bug type in top-k");
    }
  }
}

namespace {

int require_int(const nlohmann::json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_number_integer()) {
    throw Error(ErrorCode::MalformedAnnotation, where + ": field '" + key + "' must be an integer");
  }
  return it->get<int>();
}

Box require_box(const nlohmann::json& obj, int width, int height, const std::string& where) {
  if (!obj.is_object()) throw Error(ErrorCode::MalformedAnnotation, where + ": entry must be an object");
  const Box b{require_int(obj, "x", where), require_int(obj, "y", where), require_int(obj, "w", where),
              require_int(obj, "h", where)};
  if (b.w < 1 || b.h < 1) throw Error(ErrorCode::MalformedAnnotation, where + ": box must be at least 1x1");
  if (!b.within(width, height)) throw Error(ErrorCode::MalformedAnnotation, where + ": box outside image bounds");
  return b;
}

nlohmann::json parse_json_file(const fs::path& path) {
  try {
    return nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedAnnotation, path.filename().string() + ": " + e.what());
  }
}

std::vector<WidgetRegion> widgets_from_json(const nlohmann::json& j, const RgbImage& image) {
  if (!j.is_object() || !j.contains("widgets") || !j["widgets"].is_array()) {
    throw Error(ErrorCode::MalformedAnnotation, "widgets.json: expected {\"widgets\": [...]}");
  }
  std::vector<WidgetRegion> out;
  for (const auto& item : j["widgets"]) {
    WidgetRegion w;
    w.bbox = require_box(item, image.width(), image.height(), "widgets.json");
    if (const auto k = item.find("kind"); k != item.end() && !k->is_null()) {
      if (!k->is_string() || !parse_widget_kind(k->get<std::string>())) {
        throw Error(ErrorCode::MalformedAnnotation, "widgets.json: unknown widget kind " + k->dump());
      }
      w.kind = parse_widget_kind(k->get<std::string>());
    }
    if (const auto t = item.find("text"); t != item.end() && !t->is_null()) {
      if (!t->is_string()) throw Error(ErrorCode::MalformedAnnotation, "widgets.json: text must be a string or null");
      w.text = t->get<std::string>();
    }
    w.color = dominant_color(image, w.bbox);
    w.position = grid_position(w.bbox, image.width(), image.height());
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace

nlohmann::json manifest_to_json(const GroundTruth& truth) {
  nlohmann::json j;
  j["consistent"] = truth.consistent ? nlohmann::json(*truth.consistent) : nlohmann::json(nullptr);
  j["bug_type"] = truth.bug_type ? nlohmann::json(std::string(to_string(*truth.bug_type))) : nlohmann::json(nullptr);
  return j;
}

GroundTruth manifest_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::MalformedAnnotation, "manifest.json: expected an object");
  GroundTruth truth;
  if (const auto c = j.find("consistent"); c != j.end() && !c->is_null()) {
    if (!c->is_boolean()) throw Error(ErrorCode::MalformedAnnotation, "manifest.json: consistent must be bool or null");
    truth.consistent = c->get<bool>();
  }
  if (const auto t = j.find("bug_type"); t != j.end() && !t->is_null()) {
    const auto parsed = t->is_string() ? parse_bug_type(t->get<std::string>()) : std::nullopt;
    if (!parsed) throw Error(ErrorCode::MalformedAnnotation, "manifest.json: unknown bug_type " + t->dump());
    truth.bug_type = parsed;
  }
  return truth;
}

nlohmann::json ocr_to_json(const std::vector<TextRegion>& texts) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& t : texts) {
    arr.push_back({{"x", t.bbox.x}, {"y", t.bbox.y}, {"w", t.bbox.w}, {"h", t.bbox.h}, {"text", t.text}});
  }
  return {{"texts", arr}};
}

std::vector<TextRegion> ocr_from_json(const nlohmann::json& j, int width, int height) {
  if (!j.is_object() || !j.contains("texts") || !j["texts"].is_array()) {
    throw Error(ErrorCode::MalformedAnnotation, "ocr.json: expected {\"texts\": [...]}");
  }
  std::vector<TextRegion> out;
  for (const auto& item : j["texts"]) {
    TextRegion t;
    t.bbox = require_box(item, width, height, "ocr.json");
    const auto text = item.find("text");
    if (text == item.end() || !text->is_string() || text->get<std::string>().empty()) {
      throw Error(ErrorCode::MalformedAnnotation, "ocr.json: text must be a non-empty string");
    }
    t.text = text->get<std::string>();
    out.push_back(std::move(t));
  }
  return out;
}

TestReport load_report(const fs::path& bundle_dir) {
  const fs::path desc_path = bundle_dir / kDescriptionFile;
  const fs::path png_path = bundle_dir / kScreenshotFile;
  if (!fs::is_regular_file(desc_path)) throw Error(ErrorCode::MissingFile, desc_path.string());
  if (!fs::is_regular_file(png_path)) throw Error(ErrorCode::MissingFile, png_path.string());

  TestReport report;
  report.id = bundle_dir.filename().string();
  if (report.id.empty()) report.id = bundle_dir.parent_path().filename().string();

  std::string desc = read_text_file(desc_path);
  if (desc.starts_with("\xEF\xBB\xBF")) desc.erase(0, 3);
  std::erase(desc, '\r');
  if (trim(desc).empty()) throw Error(ErrorCode::EmptyDescription, desc_path.string());
  report.description = std::move(desc);

  report.screenshot = load_png(png_path);

  if (const fs::path p = bundle_dir / kOcrFile; fs::exists(p)) {
    report.ocr_annotations = ocr_from_json(parse_json_file(p), report.screenshot.width(), report.screenshot.height());
  }
  if (const fs::path p = bundle_dir / kWidgetsFile; fs::exists(p)) {
    report.widget_annotations = widgets_from_json(parse_json_file(p), report.screenshot);
  }
  if (const fs::path p = bundle_dir / kManifestFile; fs::exists(p)) {
    report.ground_truth = manifest_from_json(parse_json_file(p));
  }
  return report;
}

void write_report(const fs::path& bundle_dir, const TestReport& report) {
  fs::create_directories(bundle_dir);
  write_text_file(bundle_dir / kDescriptionFile, report.description);
  save_png(bundle_dir / kScreenshotFile, report.screenshot);
  if (report.ocr_annotations) write_text_file(bundle_dir / kOcrFile, ocr_to_json(*report.ocr_annotations).dump(2) + "\n");
  if (report.widget_annotations) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& w : *report.widget_annotations) {
      arr.push_back({{"x", w.bbox.x},
                     {"y", w.bbox.y},
                     {"w", w.bbox.w},
                     {"h", w.bbox.h},
                     {"kind", w.kind ? nlohmann::json(std::string(to_string(*w.kind))) : nlohmann::json(nullptr)},
                     {"text", w.text ? nlohmann::json(*w.text) : nlohmann::json(nullptr)}});
    }
    write_text_file(bundle_dir / kWidgetsFile, nlohmann::json{{"widgets", arr}}.dump(2) + "\n");
  }
  if (report.ground_truth) {
    write_text_file(bundle_dir / kManifestFile, manifest_to_json(*report.ground_truth).dump(2) + "\n");
  }
}

std::vector<fs::path> list_bundles(const fs::path& root) {
  if (!fs::is_directory(root)) throw Error(ErrorCode::RootNotFound, root.string());
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory()) dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end());
  return dirs;
}

std::vector<ReportValidation> validate_corpus(const fs::path& root) {
  const auto dirs = list_bundles(root);
  std::vector<ReportValidation> out(dirs.size());
  const auto n = static_cast<std::ptrdiff_t>(dirs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[i].report_id = dirs[i].filename().string();
    try {
      (void)load_report(dirs[i]);
    } catch (const Error& e) {
      out[i].issues.push_back({e.code(), e.what()});
    } catch (const std::exception& e) {
      out[i].issues.push_back({ErrorCode::IoFailure, e.what()});
    }
  }
  return out;
}

}  // namespace recode
