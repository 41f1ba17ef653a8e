#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace recode {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Pixel-space rectangle, origin top-left, half-open on the right and bottom.
struct Box {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  int right() const { return x + w; }
  int bottom() const { return y + h; }
  long long area() const { return static_cast<long long>(w) * h; }
  bool empty() const { return w <= 0 || h <= 0; }
  bool within(int width, int height) const {
    return x >= 0 && y >= 0 && w >= 0 && h >= 0 && right() <= width && bottom() <= height;
  }
  /// Centre test in doubled coordinates so odd sizes stay exact.
  bool contains_center_of(const Box& o) const {
    const int cx2 = 2 * o.x + o.w;
    const int cy2 = 2 * o.y + o.h;
    return cx2 >= 2 * x && cx2 < 2 * right() && cy2 >= 2 * y && cy2 < 2 * bottom();
  }
  bool contains(const Box& o) const {
    return o.x >= x && o.y >= y && o.right() <= right() && o.bottom() <= bottom();
  }
  friend bool operator==(const Box&, const Box&) = default;
};

long long intersection_area(const Box& a, const Box& b);
double iou(const Box& a, const Box& b);
/// Chebyshev gap between two boxes; 0 when they touch or overlap.
int gap_between(const Box& a, const Box& b);
Box union_box(const Box& a, const Box& b);

class RgbImage {
 public:
  RgbImage() = default;
  RgbImage(int width, int height, Rgb fill = {255, 255, 255})
      : width_(width), height_(height), pixels_(static_cast<std::size_t>(width) * height, fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return pixels_.empty(); }

  Rgb& at(int x, int y) { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
  const Rgb& at(int x, int y) const { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
  const std::vector<Rgb>& pixels() const { return pixels_; }

  void fill_rect(const Box& box, Rgb color);
  void outline_rect(const Box& box, Rgb color, int thickness = 1);

  friend bool operator==(const RgbImage&, const RgbImage&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<Rgb> pixels_;
};

/// Single-channel 0/1 image. For edge maps 1 marks a border pixel.
class BinaryImage {
 public:
  BinaryImage() = default;
  BinaryImage(int width, int height, std::uint8_t fill = 0)
      : width_(width), height_(height), bits_(static_cast<std::size_t>(width) * height, fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  std::uint8_t& at(int x, int y) { return bits_[static_cast<std::size_t>(y) * width_ + x]; }
  std::uint8_t at(int x, int y) const { return bits_[static_cast<std::size_t>(y) * width_ + x]; }
  std::vector<std::uint8_t>& bits() { return bits_; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  friend bool operator==(const BinaryImage&, const BinaryImage&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// 0.299R + 0.587G + 0.114B on the 0..255 scale.
inline double luminance(Rgb p) { return 0.299 * p.r + 0.587 * p.g + 0.114 * p.b; }

/// Decodes any PNG to RGB8, compositing alpha over white.
RgbImage decode_png(const std::vector<unsigned char>& bytes);
RgbImage load_png(const std::filesystem::path& path);
std::vector<unsigned char> encode_png(const RgbImage& image);
void save_png(const std::filesystem::path& path, const RgbImage& image);

RgbImage crop(const RgbImage& image, const Box& box);

}  // namespace recode
