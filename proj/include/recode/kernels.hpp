#pragma once

// Pixel kernels behind the screenshot decomposer. Each parallel kernel has a
// serial counterpart with identical arithmetic; tests and the benchmark
// compare the two.

#include <cstddef>
#include <vector>

#include "recode/image.hpp"

namespace recode::kernels {

inline constexpr double kDefaultGradientThreshold = 32.0;

std::vector<float> grayscale(const RgbImage& image);
std::vector<float> grayscale_serial(const RgbImage& image);

/// Edge map: a pixel is foreground when the largest absolute gray-level
/// difference to any in-bounds 4-neighbour is at least `threshold`
/// (0..255 scale).
BinaryImage binarize(const RgbImage& image, double threshold = kDefaultGradientThreshold);
BinaryImage binarize_serial(const RgbImage& image, double threshold = kDefaultGradientThreshold);

/// Pixel count of the largest 4-connected background (0) component.
std::size_t largest_background_component(const BinaryImage& mask);
std::size_t largest_background_component_serial(const BinaryImage& mask);

}  // namespace recode::kernels
