#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "recode/image.hpp"
#include "recode/kernels.hpp"
#include "recode/lexicon.hpp"
#include "recode/types.hpp"

namespace recode {

class PluginProcess;

struct DecomposerConfig {
  double gradient_threshold = kernels::kDefaultGradientThreshold;
  double merge_overlap = 0.30;  // intersection / smaller box area
  int merge_gap = 4;            // pixels
  int min_widget_size = 8;
  double popup_min_width = 0.15;
  double popup_max_width = 0.85;
  double popup_min_height = 0.05;
  double popup_max_height = 0.60;
  double popup_min_contrast = 24.0;  // 0..255 luminance
  double icon_max_distance = 0.15;   // normalized Hamming distance
};

// ---- OCR --------------------------------------------------------------

class OcrBackend {
 public:
  virtual ~OcrBackend() = default;
  /// Throws Error(OcrFailure) when recognition is unavailable.
  virtual std::vector<TextRegion> recognize(const RgbImage& image) = 0;
};

/// Serves the texts shipped in a report's ocr.json sidecar.
class SidecarOcr : public OcrBackend {
 public:
  explicit SidecarOcr(std::vector<TextRegion> texts) : texts_(std::move(texts)) {}
  std::vector<TextRegion> recognize(const RgbImage&) override { return texts_; }

 private:
  std::vector<TextRegion> texts_;
};

/// External OCR engine over the plugin transport (protocol "recode-ocr").
class PluginOcr : public OcrBackend {
 public:
  explicit PluginOcr(std::shared_ptr<PluginProcess> process) : process_(std::move(process)) {}
  std::vector<TextRegion> recognize(const RgbImage& image) override;

 private:
  std::shared_ptr<PluginProcess> process_;
};

// ---- widget typing ----------------------------------------------------

class WidgetTyper {
 public:
  virtual ~WidgetTyper() = default;
  virtual std::optional<WidgetKind> classify(const RgbImage& crop, std::span<const TextRegion> texts_inside) = 0;
};

/// Coarse guesses from fill, border and text coverage: Button, TextView,
/// EditText or ImageView; anything else stays untyped.
class HeuristicTyper : public WidgetTyper {
 public:
  std::optional<WidgetKind> classify(const RgbImage& crop, std::span<const TextRegion> texts_inside) override;
};

/// Widget typing model over the plugin transport (`"op":"type_widget"`).
class PluginTyper : public WidgetTyper {
 public:
  explicit PluginTyper(std::shared_ptr<PluginProcess> process) : process_(std::move(process)) {}
  std::optional<WidgetKind> classify(const RgbImage& crop, std::span<const TextRegion> texts_inside) override;

 private:
  std::shared_ptr<PluginProcess> process_;
};

// ---- primitives -------------------------------------------------------

BinaryImage binarize(const RgbImage& image, double threshold = kernels::kDefaultGradientThreshold);

/// Largest 4-connected background component over the total pixel count.
double max_blank_area_ratio(const BinaryImage& edges);

/// Most frequent quantized colour inside the box (1px border excluded when
/// the box is at least 3px), snapped to the nearest canonical colour.
Color dominant_color(const RgbImage& image, const Box& box);

/// Grid cell holding the box centre; a centre on a third boundary belongs
/// to the earlier cell.
Position grid_position(const Box& box, int width, int height);

/// Bounding boxes of 4-connected foreground components after merging and
/// size filtering, sorted by (y, x).
std::vector<Box> candidate_boxes(const BinaryImage& edges, const DecomposerConfig& cfg = {});

std::vector<WidgetRegion> extract_widgets(const RgbImage& image, std::span<const TextRegion> texts,
                                          WidgetTyper& typer, const DecomposerConfig& cfg = {});

struct WidgetExtraction {
  std::vector<WidgetRegion> widgets;
  std::vector<TextRegion> texts;
  std::vector<std::string> warnings;
};

/// Runs OCR then extraction; an OCR failure leaves texts empty and records
/// a warning.
WidgetExtraction extract_widgets(const RgbImage& image, OcrBackend& ocr, WidgetTyper& typer,
                                 const DecomposerConfig& cfg = {});

std::optional<WidgetRegion> detect_popup(const RgbImage& image, std::span<const WidgetRegion> widgets,
                                         const DecomposerConfig& cfg = {});

struct IconMatch {
  std::size_t widget_index;
  std::string template_id;
  double distance;
};

std::optional<IconMatch> find_loading_icon(const RgbImage& image, std::span<const WidgetRegion> widgets,
                                           std::span<const IconTemplate> templates,
                                           const DecomposerConfig& cfg = {});
bool match_loading_icon(const RgbImage& image, std::span<const WidgetRegion> widgets,
                        std::span<const IconTemplate> templates, const DecomposerConfig& cfg = {});

/// 16x16 ink sample of a region: pixels darker than the midpoint of the
/// region's luminance range, cropped to the ink extent. Empty for flat regions.
std::optional<std::array<std::uint8_t, kIconSize * kIconSize>> icon_signature(const RgbImage& image,
                                                                             const Box& box);

enum class Relation { LeftOf, RightOf, Above, Below, Contains, ContainedBy };
std::string_view to_string(Relation r);
Relation inverse(Relation r);

struct LayoutEdge {
  std::size_t from;
  std::size_t to;
  Relation relation;
  friend bool operator==(const LayoutEdge&, const LayoutEdge&) = default;
  friend auto operator<=>(const LayoutEdge& a, const LayoutEdge& b) {
    return std::tie(a.from, a.to, a.relation) <=> std::tie(b.from, b.to, b.relation);
  }
};

struct LayoutGraph {
  std::size_t node_count = 0;
  std::vector<LayoutEdge> edges;
};

LayoutGraph characterize_layout(std::span<const WidgetRegion> widgets);

struct ScreenDecomposition {
  std::vector<WidgetRegion> widgets;
  std::vector<TextRegion> texts;
  LayoutGraph layout;
  std::optional<WidgetRegion> popup;
  double blank_ratio = 0.0;
  std::optional<IconMatch> loading_icon;
  std::vector<std::string> warnings;
};

/// Full decomposition. When `annotated_widgets` is given it replaces
/// extraction; OCR texts not linked to any widget become TextView widgets.
ScreenDecomposition decompose_screen(const RgbImage& image, OcrBackend& ocr, WidgetTyper& typer,
                                     const LexiconSet& lexicons, const DecomposerConfig& cfg = {},
                                     const std::optional<std::vector<WidgetRegion>>& annotated_widgets = std::nullopt);

}  // namespace recode
