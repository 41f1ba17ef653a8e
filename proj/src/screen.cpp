#include "recode/screen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "recode/error.hpp"
#include "recode/plugin.hpp"
#include "recode/text_util.hpp"

namespace recode {

namespace {

bool box_order(const Box& a, const Box& b) { return std::tie(a.y, a.x, a.h, a.w) < std::tie(b.y, b.x, b.h, b.w); }

double mean_luminance(const RgbImage& image, const Box& box) {
  double sum = 0.0;
  for (int y = box.y; y < box.bottom(); ++y) {
    for (int x = box.x; x < box.right(); ++x) sum += luminance(image.at(x, y));
  }
  return box.area() > 0 ? sum / static_cast<double>(box.area()) : 0.0;
}

double ring_luminance(const RgbImage& image, int inset) {
  const int w = image.width();
  const int h = image.height();
  if (w - 2 * inset <= 0 || h - 2 * inset <= 0) return 0.0;
  double sum = 0.0;
  long long n = 0;
  for (int y = inset; y < h - inset; ++y) {
    for (int x = inset; x < w - inset; ++x) {
      if (y != inset && y != h - inset - 1 && x != inset && x != w - inset - 1) continue;
      sum += luminance(image.at(x, y));
      ++n;
    }
  }
  return n > 0 ? sum / static_cast<double>(n) : 0.0;
}

std::vector<TextRegion> texts_from_json(const nlohmann::json& j) {
  std::vector<TextRegion> out;
  for (const auto& t : j.at("texts")) {
    out.push_back({{t.at("x").get<int>(), t.at("y").get<int>(), t.at("w").get<int>(), t.at("h").get<int>()},
                   t.at("text").get<std::string>()});
  }
  return out;
}

std::vector<WidgetRegion> widgets_from_boxes(const RgbImage& image, const std::vector<Box>& boxes,
                                             std::span<const TextRegion> texts, WidgetTyper& typer) {
  // Each text goes to the smallest box containing its centre.
  std::vector<std::vector<TextRegion>> linked(boxes.size());
  for (const auto& t : texts) {
    std::size_t best = boxes.size();
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      if (!boxes[i].contains_center_of(t.bbox)) continue;
      if (best == boxes.size() || boxes[i].area() < boxes[best].area()) best = i;
    }
    if (best < boxes.size()) linked[best].push_back(t);
  }
  std::vector<WidgetRegion> out;
  out.reserve(boxes.size());
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    auto& lt = linked[i];
    std::sort(lt.begin(), lt.end(), [](const TextRegion& a, const TextRegion& b) { return box_order(a.bbox, b.bbox); });
    WidgetRegion w;
    w.bbox = boxes[i];
    if (!lt.empty()) {
      std::string joined;
      for (const auto& t : lt) joined += (joined.empty() ? "" : " ") + t.text;
      w.text = joined;
    }
    w.kind = typer.classify(crop(image, boxes[i]), lt);
    w.color = dominant_color(image, boxes[i]);
    w.position = grid_position(boxes[i], image.width(), image.height());
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace

// ---- plugins ------------------------------------------------------------

std::vector<TextRegion> PluginOcr::recognize(const RgbImage& image) {
  try {
    const auto response = process_->request({{"op", "ocr"}, {"image_png_base64", base64_encode(encode_png(image))}});
    auto texts = texts_from_json(response);
    for (const auto& t : texts) {
      if (!t.bbox.within(image.width(), image.height()) || t.text.empty()) {
        throw Error(ErrorCode::OcrFailure, "plugin returned an out-of-bounds or empty text region");
      }
    }
    return texts;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::OcrFailure) throw;
    throw Error(ErrorCode::OcrFailure, e.what());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::OcrFailure, std::string("malformed OCR response: ") + e.what());
  }
}

std::optional<WidgetKind> PluginTyper::classify(const RgbImage& crop_image, std::span<const TextRegion> texts) {
  nlohmann::json req = {{"op", "type_widget"}, {"image_png_base64", base64_encode(encode_png(crop_image))}};
  req["texts"] = nlohmann::json::array();
  for (const auto& t : texts) req["texts"].push_back(t.text);
  const auto response = process_->request(std::move(req));
  const auto it = response.find("kind");
  if (it == response.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw Error(ErrorCode::PluginUnavailable, "type_widget: kind must be a string or null");
  return parse_widget_kind(it->get<std::string>());
}

std::optional<WidgetKind> HeuristicTyper::classify(const RgbImage& crop_image, std::span<const TextRegion> texts) {
  const int w = crop_image.width();
  const int h = crop_image.height();
  const long long area = static_cast<long long>(w) * h;
  if (area == 0) return std::nullopt;
  if (texts.empty()) {
    const double aspect = static_cast<double>(w) / h;
    if (aspect >= 0.5 && aspect <= 2.0 && std::min(w, h) >= 12) return WidgetKind::ImageView;
    return std::nullopt;
  }
  long long text_area = 0;
  for (const auto& t : texts) text_area += std::min(t.bbox.area(), area);
  if (static_cast<double>(std::min(text_area, area)) >= 0.6 * static_cast<double>(area)) return WidgetKind::TextView;

  const int inset = (w >= 6 && h >= 6) ? 2 : 0;
  const Box interior{inset, inset, w - 2 * inset, h - 2 * inset};
  long long light = 0;
  for (int y = interior.y; y < interior.bottom(); ++y) {
    for (int x = interior.x; x < interior.right(); ++x) light += luminance(crop_image.at(x, y)) >= 240.0 ? 1 : 0;
  }
  const double light_fraction = static_cast<double>(light) / static_cast<double>(interior.area());
  const double border = std::min(ring_luminance(crop_image, 0), ring_luminance(crop_image, 1));
  const bool framed = inset > 0 && border < mean_luminance(crop_image, interior) - 24.0;
  if (light_fraction >= 0.6 && framed) return WidgetKind::EditText;
  if (light_fraction < 0.5) return WidgetKind::Button;
  return WidgetKind::TextView;
}

// ---- primitives ---------------------------------------------------------

BinaryImage binarize(const RgbImage& image, double threshold) { return kernels::binarize(image, threshold); }

double max_blank_area_ratio(const BinaryImage& edges) {
  const auto total = static_cast<double>(edges.width()) * edges.height();
  if (total == 0.0) return 0.0;
  return static_cast<double>(kernels::largest_background_component(edges)) / total;
}

Color dominant_color(const RgbImage& image, const Box& box) {
  if (box.w < 1 || box.h < 1) throw Error(ErrorCode::DegenerateBox, "box has zero width or height");
  Box interior = box;
  if (box.w >= 3 && box.h >= 3) interior = {box.x + 1, box.y + 1, box.w - 2, box.h - 2};
  std::array<long long, 512> count{};
  std::array<std::array<long long, 3>, 512> sum{};
  for (int y = interior.y; y < interior.bottom(); ++y) {
    for (int x = interior.x; x < interior.right(); ++x) {
      const Rgb p = image.at(x, y);
      const int bin = ((p.r >> 5) << 6) | ((p.g >> 5) << 3) | (p.b >> 5);
      ++count[bin];
      sum[bin][0] += p.r;
      sum[bin][1] += p.g;
      sum[bin][2] += p.b;
    }
  }
  const auto best_bin = static_cast<std::size_t>(std::max_element(count.begin(), count.end()) - count.begin());
  const double n = static_cast<double>(count[best_bin]);
  const double r = sum[best_bin][0] / n;
  const double g = sum[best_bin][1] / n;
  const double b = sum[best_bin][2] / n;
  Color best = Color::Black;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < kColorCount; ++c) {
    const Rgb ref = reference_rgb(static_cast<Color>(c));
    const double d = (r - ref.r) * (r - ref.r) + (g - ref.g) * (g - ref.g) + (b - ref.b) * (b - ref.b);
    if (d < best_d) {
      best_d = d;
      best = static_cast<Color>(c);
    }
  }
  return best;
}

Position grid_position(const Box& box, int width, int height) {
  // Doubled centre against thirds: 3 * (2x + w) <= 2W  <=>  cx <= W / 3.
  auto cell = [](long long twice_center, long long extent) {
    if (3 * twice_center <= 2 * extent) return 0;
    if (3 * twice_center <= 4 * extent) return 1;
    return 2;
  };
  const int col = cell(2LL * box.x + box.w, width);
  const int row = cell(2LL * box.y + box.h, height);
  return static_cast<Position>(row * 3 + col);
}

std::vector<Box> candidate_boxes(const BinaryImage& edges, const DecomposerConfig& cfg) {
  const int w = edges.width();
  const int h = edges.height();
  std::vector<Box> boxes;
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(w) * h, 0);
  std::vector<int> stack;
  for (int sy = 0; sy < h; ++sy) {
    for (int sx = 0; sx < w; ++sx) {
      const std::size_t s = static_cast<std::size_t>(sy) * w + sx;
      if (!edges.bits()[s] || seen[s]) continue;
      int x0 = sx, x1 = sx, y0 = sy, y1 = sy;
      seen[s] = 1;
      stack.assign(1, static_cast<int>(s));
      while (!stack.empty()) {
        const int i = stack.back();
        stack.pop_back();
        const int x = i % w;
        const int y = i / w;
        x0 = std::min(x0, x);
        x1 = std::max(x1, x);
        y0 = std::min(y0, y);
        y1 = std::max(y1, y);
        const int nbr[4][2] = {{x - 1, y}, {x + 1, y}, {x, y - 1}, {x, y + 1}};
        for (const auto& q : nbr) {
          if (q[0] < 0 || q[1] < 0 || q[0] >= w || q[1] >= h) continue;
          const std::size_t j = static_cast<std::size_t>(q[1]) * w + q[0];
          if (edges.bits()[j] && !seen[j]) {
            seen[j] = 1;
            stack.push_back(static_cast<int>(j));
          }
        }
      }
      boxes.push_back({x0, y0, x1 - x0 + 1, y1 - y0 + 1});
    }
  }

  auto mergeable = [&cfg](const Box& a, const Box& b) {
    if (gap_between(a, b) <= cfg.merge_gap) return true;
    const auto smaller = std::min(a.area(), b.area());
    return smaller > 0 && static_cast<double>(intersection_area(a, b)) >= cfg.merge_overlap * static_cast<double>(smaller);
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      for (std::size_t j = i + 1; j < boxes.size();) {
        if (mergeable(boxes[i], boxes[j])) {
          boxes[i] = union_box(boxes[i], boxes[j]);
          boxes.erase(boxes.begin() + static_cast<std::ptrdiff_t>(j));
          changed = true;
        } else {
          ++j;
        }
      }
    }
  }
  std::erase_if(boxes, [&cfg](const Box& b) { return b.w < cfg.min_widget_size || b.h < cfg.min_widget_size; });
  std::sort(boxes.begin(), boxes.end(), box_order);
  return boxes;
}

std::vector<WidgetRegion> extract_widgets(const RgbImage& image, std::span<const TextRegion> texts,
                                          WidgetTyper& typer, const DecomposerConfig& cfg) {
  const auto edges = binarize(image, cfg.gradient_threshold);
  return widgets_from_boxes(image, candidate_boxes(edges, cfg), texts, typer);
}

WidgetExtraction extract_widgets(const RgbImage& image, OcrBackend& ocr, WidgetTyper& typer,
                                 const DecomposerConfig& cfg) {
  WidgetExtraction out;
  try {
    out.texts = ocr.recognize(image);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::OcrFailure) throw;
    out.warnings.push_back(e.what());
  }
  out.widgets = extract_widgets(image, out.texts, typer, cfg);
  return out;
}

std::optional<WidgetRegion> detect_popup(const RgbImage& image, std::span<const WidgetRegion> widgets,
                                         const DecomposerConfig& cfg) {
  const int w = image.width();
  const int h = image.height();
  if (w == 0 || h == 0) return std::nullopt;
  // Summed-area table of luminance.
  std::vector<double> sat(static_cast<std::size_t>(w + 1) * (h + 1), 0.0);
  for (int y = 0; y < h; ++y) {
    double row = 0.0;
    for (int x = 0; x < w; ++x) {
      row += luminance(image.at(x, y));
      sat[static_cast<std::size_t>(y + 1) * (w + 1) + x + 1] = sat[static_cast<std::size_t>(y) * (w + 1) + x + 1] + row;
    }
  }
  auto box_sum = [&](const Box& b) {
    auto at = [&](int x, int y) { return sat[static_cast<std::size_t>(y) * (w + 1) + x]; };
    return at(b.right(), b.bottom()) - at(b.x, b.bottom()) - at(b.right(), b.y) + at(b.x, b.y);
  };
  const double total_sum = box_sum({0, 0, w, h});
  const double total_n = static_cast<double>(w) * h;

  std::optional<WidgetRegion> best;
  for (const auto& widget : widgets) {
    const Box& b = widget.bbox;
    const Position pos = grid_position(b, w, h);
    const bool middle_column = pos == Position::Top || pos == Position::Center || pos == Position::Bottom;
    if (!middle_column) continue;
    const double fw = static_cast<double>(b.w) / w;
    const double fh = static_cast<double>(b.h) / h;
    if (fw < cfg.popup_min_width || fw > cfg.popup_max_width || fh < cfg.popup_min_height || fh > cfg.popup_max_height) {
      continue;
    }
    const double inside_n = static_cast<double>(b.area());
    if (inside_n >= total_n) continue;
    const double inside = box_sum(b);
    const double contrast = std::abs(inside / inside_n - (total_sum - inside) / (total_n - inside_n));
    if (contrast < cfg.popup_min_contrast) continue;
    if (!best || b.area() > best->bbox.area()) best = widget;
  }
  return best;
}

std::optional<std::array<std::uint8_t, kIconSize * kIconSize>> icon_signature(const RgbImage& image, const Box& box) {
  double lo = 255.0;
  double hi = 0.0;
  for (int y = box.y; y < box.bottom(); ++y) {
    for (int x = box.x; x < box.right(); ++x) {
      const double l = luminance(image.at(x, y));
      lo = std::min(lo, l);
      hi = std::max(hi, l);
    }
  }
  if (hi - lo < 24.0) return std::nullopt;
  const double mid = (lo + hi) / 2.0;
  int x0 = box.right(), y0 = box.bottom(), x1 = box.x - 1, y1 = box.y - 1;
  for (int y = box.y; y < box.bottom(); ++y) {
    for (int x = box.x; x < box.right(); ++x) {
      if (luminance(image.at(x, y)) < mid) {
        x0 = std::min(x0, x);
        y0 = std::min(y0, y);
        x1 = std::max(x1, x);
        y1 = std::max(y1, y);
      }
    }
  }
  const int iw = x1 - x0 + 1;
  const int ih = y1 - y0 + 1;
  std::array<std::uint8_t, kIconSize * kIconSize> bits{};
  for (int j = 0; j < kIconSize; ++j) {
    const int sy = y0 + (2 * j + 1) * ih / (2 * kIconSize);
    for (int i = 0; i < kIconSize; ++i) {
      const int sx = x0 + (2 * i + 1) * iw / (2 * kIconSize);
      bits[j * kIconSize + i] = luminance(image.at(sx, sy)) < mid ? 1 : 0;
    }
  }
  return bits;
}

std::optional<IconMatch> find_loading_icon(const RgbImage& image, std::span<const WidgetRegion> widgets,
                                           std::span<const IconTemplate> templates, const DecomposerConfig& cfg) {
  // Closest template over all widgets; ties keep the earlier widget and template.
  std::optional<IconMatch> best;
  for (std::size_t i = 0; i < widgets.size(); ++i) {
    const auto sig = icon_signature(image, widgets[i].bbox);
    if (!sig) continue;
    for (const auto& t : templates) {
      int mismatches = 0;
      for (std::size_t k = 0; k < t.bits.size(); ++k) mismatches += (*sig)[k] != t.bits[k];
      const double distance = static_cast<double>(mismatches) / static_cast<double>(t.bits.size());
      if (distance <= cfg.icon_max_distance && (!best || distance < best->distance)) best = IconMatch{i, t.id, distance};
    }
  }
  return best;
}

bool match_loading_icon(const RgbImage& image, std::span<const WidgetRegion> widgets,
                        std::span<const IconTemplate> templates, const DecomposerConfig& cfg) {
  return find_loading_icon(image, widgets, templates, cfg).has_value();
}

std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::LeftOf: return "left-of";
    case Relation::RightOf: return "right-of";
    case Relation::Above: return "above";
    case Relation::Below: return "below";
    case Relation::Contains: return "contains";
    case Relation::ContainedBy: return "contained-by";
  }
  return "?";
}

Relation inverse(Relation r) {
  switch (r) {
    case Relation::LeftOf: return Relation::RightOf;
    case Relation::RightOf: return Relation::LeftOf;
    case Relation::Above: return Relation::Below;
    case Relation::Below: return Relation::Above;
    case Relation::Contains: return Relation::ContainedBy;
    case Relation::ContainedBy: return Relation::Contains;
  }
  return r;
}

LayoutGraph characterize_layout(std::span<const WidgetRegion> widgets) {
  LayoutGraph g;
  g.node_count = widgets.size();
  auto add = [&g](std::size_t a, std::size_t b, Relation r) {
    g.edges.push_back({a, b, r});
    g.edges.push_back({b, a, inverse(r)});
  };
  for (std::size_t a = 0; a < widgets.size(); ++a) {
    for (std::size_t b = a + 1; b < widgets.size(); ++b) {
      const Box& A = widgets[a].bbox;
      const Box& B = widgets[b].bbox;
      if (A == B) continue;
      if (A.contains(B)) {
        add(a, b, Relation::Contains);
        continue;
      }
      if (B.contains(A)) {
        add(b, a, Relation::Contains);
        continue;
      }
      if (A.right() <= B.x) add(a, b, Relation::LeftOf);
      if (B.right() <= A.x) add(b, a, Relation::LeftOf);
      if (A.bottom() <= B.y) add(a, b, Relation::Above);
      if (B.bottom() <= A.y) add(b, a, Relation::Above);
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

ScreenDecomposition decompose_screen(const RgbImage& image, OcrBackend& ocr, WidgetTyper& typer,
                                     const LexiconSet& lexicons, const DecomposerConfig& cfg,
                                     const std::optional<std::vector<WidgetRegion>>& annotated_widgets) {
  ScreenDecomposition out;
  try {
    out.texts = ocr.recognize(image);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::OcrFailure) throw;
    out.warnings.push_back(e.what());
  }
  const auto edges = binarize(image, cfg.gradient_threshold);
  out.blank_ratio = max_blank_area_ratio(edges);
  if (annotated_widgets) {
    out.widgets = *annotated_widgets;
  } else {
    out.widgets = widgets_from_boxes(image, candidate_boxes(edges, cfg), out.texts, typer);
  }
  // Texts outside every widget become free-standing text widgets.
  for (const auto& t : out.texts) {
    const bool linked = std::any_of(out.widgets.begin(), out.widgets.end(),
                                    [&t](const WidgetRegion& w) { return w.bbox.contains_center_of(t.bbox); });
    if (linked || t.bbox.empty()) continue;
    WidgetRegion w;
    w.bbox = t.bbox;
    w.text = t.text;
    w.kind = WidgetKind::TextView;
    w.color = dominant_color(image, t.bbox);
    w.position = grid_position(t.bbox, image.width(), image.height());
    out.widgets.push_back(std::move(w));
  }
  std::stable_sort(out.widgets.begin(), out.widgets.end(),
                   [](const WidgetRegion& a, const WidgetRegion& b) { return box_order(a.bbox, b.bbox); });
  out.layout = characterize_layout(out.widgets);
  out.popup = detect_popup(image, out.widgets, cfg);
  out.loading_icon = find_loading_icon(image, out.widgets, lexicons.loading_icon_templates(), cfg);
  return out;
}

}  // namespace recode
