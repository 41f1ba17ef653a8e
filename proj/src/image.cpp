#include "recode/image.hpp"

#include <png.h>

#include <cstring>

#include "recode/error.hpp"
#include "recode/text_util.hpp"

namespace recode {

long long intersection_area(const Box& a, const Box& b) {
  const int x0 = std::max(a.x, b.x);
  const int y0 = std::max(a.y, b.y);
  const int x1 = std::min(a.right(), b.right());
  const int y1 = std::min(a.bottom(), b.bottom());
  if (x1 <= x0 || y1 <= y0) return 0;
  return static_cast<long long>(x1 - x0) * (y1 - y0);
}

double iou(const Box& a, const Box& b) {
  const long long inter = intersection_area(a, b);
  const long long uni = a.area() + b.area() - inter;
  return uni > 0 ? static_cast<double>(inter) / static_cast<double>(uni) : 0.0;
}

int gap_between(const Box& a, const Box& b) {
  const int dx = std::max({0, b.x - a.right(), a.x - b.right()});
  const int dy = std::max({0, b.y - a.bottom(), a.y - b.bottom()});
  return std::max(dx, dy);
}

Box union_box(const Box& a, const Box& b) {
  const int x0 = std::min(a.x, b.x);
  const int y0 = std::min(a.y, b.y);
  const int x1 = std::max(a.right(), b.right());
  const int y1 = std::max(a.bottom(), b.bottom());
  return {x0, y0, x1 - x0, y1 - y0};
}

void RgbImage::fill_rect(const Box& box, Rgb color) {
  const int x0 = std::max(0, box.x);
  const int y0 = std::max(0, box.y);
  const int x1 = std::min(width_, box.right());
  const int y1 = std::min(height_, box.bottom());
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) at(x, y) = color;
  }
}

void RgbImage::outline_rect(const Box& box, Rgb color, int thickness) {
  fill_rect({box.x, box.y, box.w, thickness}, color);
  fill_rect({box.x, box.bottom() - thickness, box.w, thickness}, color);
  fill_rect({box.x, box.y, thickness, box.h}, color);
  fill_rect({box.right() - thickness, box.y, thickness, box.h}, color);
}

RgbImage decode_png(const std::vector<unsigned char>& bytes) {
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&img, bytes.data(), bytes.size())) {
    throw Error(ErrorCode::MalformedImage, img.message);
  }
  img.format = PNG_FORMAT_RGBA;
  if (img.width == 0 || img.height == 0 || img.width > 1u << 15 || img.height > 1u << 15) {
    png_image_free(&img);
    throw Error(ErrorCode::MalformedImage, "unsupported dimensions");
  }
  std::vector<unsigned char> rgba(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, rgba.data(), 0, nullptr)) {
    const std::string msg = img.message;
    png_image_free(&img);
    throw Error(ErrorCode::MalformedImage, msg);
  }
  RgbImage out(static_cast<int>(img.width), static_cast<int>(img.height));
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      const unsigned char* p = &rgba[(static_cast<std::size_t>(y) * out.width() + x) * 4];
      const unsigned a = p[3];
      auto over_white = [a](unsigned c) {
        return static_cast<std::uint8_t>((c * a + 255u * (255u - a) + 127u) / 255u);
      };
      out.at(x, y) = {over_white(p[0]), over_white(p[1]), over_white(p[2])};
    }
  }
  return out;
}

RgbImage load_png(const std::filesystem::path& path) { return decode_png(read_binary_file(path)); }

std::vector<unsigned char> encode_png(const RgbImage& image) {
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(image.width());
  img.height = static_cast<png_uint_32>(image.height());
  img.format = PNG_FORMAT_RGB;
  static_assert(sizeof(Rgb) == 3);
  const void* data = image.pixels().data();
  png_alloc_size_t size = 0;
  if (!png_image_write_get_memory_size(img, size, 0, data, 0, nullptr)) {
    throw Error(ErrorCode::IoFailure, std::string("png encode: ") + img.message);
  }
  std::vector<unsigned char> out(size);
  if (!png_image_write_to_memory(&img, out.data(), &size, 0, data, 0, nullptr)) {
    throw Error(ErrorCode::IoFailure, std::string("png encode: ") + img.message);
  }
  out.resize(size);
  return out;
}

void save_png(const std::filesystem::path& path, const RgbImage& image) {
  write_binary_file(path, encode_png(image));
}

RgbImage crop(const RgbImage& image, const Box& box) {
  RgbImage out(box.w, box.h);
  for (int y = 0; y < box.h; ++y) {
    for (int x = 0; x < box.w; ++x) out.at(x, y) = image.at(box.x + x, box.y + y);
  }
  return out;
}

}  // namespace recode
