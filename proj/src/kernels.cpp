#include "recode/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace recode::kernels {

namespace {

inline float gray_of(Rgb p) {
  return static_cast<float>(0.299 * p.r + 0.587 * p.g + 0.114 * p.b);
}

inline std::uint8_t edge_at(const std::vector<float>& gray, int w, int h, int x, int y, double threshold) {
  const float c = gray[static_cast<std::size_t>(y) * w + x];
  float g = 0.0f;
  if (x > 0) g = std::max(g, std::fabs(c - gray[static_cast<std::size_t>(y) * w + x - 1]));
  if (x + 1 < w) g = std::max(g, std::fabs(c - gray[static_cast<std::size_t>(y) * w + x + 1]));
  if (y > 0) g = std::max(g, std::fabs(c - gray[static_cast<std::size_t>(y - 1) * w + x]));
  if (y + 1 < h) g = std::max(g, std::fabs(c - gray[static_cast<std::size_t>(y + 1) * w + x]));
  return g >= threshold ? 1 : 0;
}

std::size_t find_root(std::vector<std::uint32_t>& parent, std::uint32_t i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

void unite(std::vector<std::uint32_t>& parent, std::uint32_t a, std::uint32_t b) {
  const auto ra = static_cast<std::uint32_t>(find_root(parent, a));
  const auto rb = static_cast<std::uint32_t>(find_root(parent, b));
  if (ra == rb) return;
  // Smaller index becomes the root so the result is schedule-independent.
  if (ra < rb) {
    parent[rb] = ra;
  } else {
    parent[ra] = rb;
  }
}

}  // namespace

std::vector<float> grayscale(const RgbImage& image) {
  const auto& px = image.pixels();
  std::vector<float> out(px.size());
  const auto n = static_cast<std::ptrdiff_t>(px.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = gray_of(px[i]);
  return out;
}

std::vector<float> grayscale_serial(const RgbImage& image) {
  const auto& px = image.pixels();
  std::vector<float> out(px.size());
  for (std::size_t i = 0; i < px.size(); ++i) out[i] = gray_of(px[i]);
  return out;
}

BinaryImage binarize(const RgbImage& image, double threshold) {
  const int w = image.width();
  const int h = image.height();
  const auto gray = grayscale(image);
  BinaryImage out(w, h);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) out.at(x, y) = edge_at(gray, w, h, x, y, threshold);
  }
  return out;
}

BinaryImage binarize_serial(const RgbImage& image, double threshold) {
  const int w = image.width();
  const int h = image.height();
  const auto gray = grayscale_serial(image);
  BinaryImage out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) out.at(x, y) = edge_at(gray, w, h, x, y, threshold);
  }
  return out;
}

std::size_t largest_background_component(const BinaryImage& mask) {
  const int w = mask.width();
  const int h = mask.height();
  if (w == 0 || h == 0) return 0;
  const std::size_t n = static_cast<std::size_t>(w) * h;
  std::vector<std::uint32_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0u);

  // Label horizontal strips independently; unions stay inside a strip.
  const int strips = std::max(1, std::min(h, omp_get_max_threads()));
  std::vector<int> strip_begin(strips + 1);
  for (int s = 0; s <= strips; ++s) strip_begin[s] = static_cast<int>(static_cast<long long>(h) * s / strips);

#pragma omp parallel for schedule(static)
  for (int s = 0; s < strips; ++s) {
    for (int y = strip_begin[s]; y < strip_begin[s + 1]; ++y) {
      for (int x = 0; x < w; ++x) {
        if (mask.at(x, y)) continue;
        const auto i = static_cast<std::uint32_t>(y * w + x);
        if (x > 0 && !mask.at(x - 1, y)) unite(parent, i, i - 1);
        if (y > strip_begin[s] && !mask.at(x, y - 1)) unite(parent, i, i - static_cast<std::uint32_t>(w));
      }
    }
  }
  // Stitch strip seams.
  for (int s = 1; s < strips; ++s) {
    const int y = strip_begin[s];
    if (y == 0 || y >= h) continue;
    for (int x = 0; x < w; ++x) {
      if (!mask.at(x, y) && !mask.at(x, y - 1)) {
        const auto i = static_cast<std::uint32_t>(y * w + x);
        unite(parent, i, i - static_cast<std::uint32_t>(w));
      }
    }
  }

  std::vector<std::uint32_t> size(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!mask.bits()[i]) ++size[find_root(parent, static_cast<std::uint32_t>(i))];
  }
  return *std::max_element(size.begin(), size.end());
}

std::size_t largest_background_component_serial(const BinaryImage& mask) {
  const int w = mask.width();
  const int h = mask.height();
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(w) * h, 0);
  std::vector<int> queue;
  std::size_t best = 0;
  for (int sy = 0; sy < h; ++sy) {
    for (int sx = 0; sx < w; ++sx) {
      const std::size_t start = static_cast<std::size_t>(sy) * w + sx;
      if (mask.bits()[start] || seen[start]) continue;
      std::size_t count = 0;
      queue.assign(1, static_cast<int>(start));
      seen[start] = 1;
      for (std::size_t head = 0; head < queue.size(); ++head) {
        const int i = queue[head];
        ++count;
        const int x = i % w;
        const int y = i / w;
        const int nbr[4][2] = {{x - 1, y}, {x + 1, y}, {x, y - 1}, {x, y + 1}};
        for (const auto& q : nbr) {
          if (q[0] < 0 || q[1] < 0 || q[0] >= w || q[1] >= h) continue;
          const std::size_t j = static_cast<std::size_t>(q[1]) * w + q[0];
          if (!mask.bits()[j] && !seen[j]) {
            seen[j] = 1;
            queue.push_back(static_cast<int>(j));
          }
        }
      }
      best = std::max(best, count);
    }
  }
  return best;
}

}  // namespace recode::kernels
