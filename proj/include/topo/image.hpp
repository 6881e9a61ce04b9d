#pragma once
/**
 * @file image.hpp
 * @brief Raster types and the channel transforms every filtration runs on.
 *
 * Images are immutable value types: planar row-major storage, 8-bit color
 * channels, real-valued grayscale in [0, 255].
 */

#include <cstdint>
#include <tuple>
#include <vector>

namespace topo {

struct RgbImage {
  int width = 0;
  int height = 0;
  // Planar channels, row-major, size width*height each.
  std::vector<std::uint8_t> r, g, b;

  std::size_t pixel_count() const { return std::size_t(width) * height; }
};

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<float> values;  // each in [0, 255]

  std::size_t pixel_count() const { return std::size_t(width) * height; }
  float at(int x, int y) const { return values[std::size_t(y) * width + x]; }
};

/// Binary image; bit value 1 = white = foreground.
struct BinaryImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  std::size_t pixel_count() const { return std::size_t(width) * height; }
  bool at(int x, int y) const { return bits[std::size_t(y) * width + x] != 0; }
  void set(int x, int y, bool v) { bits[std::size_t(y) * width + x] = v ? 1 : 0; }
};

/// Segmentation output; bit value 1 = lesion.
using Mask = BinaryImage;

/// Channel-average grayscale: value = (R+G+B)/3, kept as a real.
GrayImage rgb_to_gray(const RgbImage& img);

/// X, Y, Z channels from the linear sRGB->XYZ (D65) matrix applied to raw
/// 0-255 values, clamped to [0, 255].  No gamma expansion.
std::tuple<GrayImage, GrayImage, GrayImage> rgb_to_xyz(const RgbImage& img);

/// Pixels with mask bit 0 become white (255,255,255); the rest are kept.
/// Throws std::invalid_argument on dimension mismatch.
RgbImage apply_mask(const RgbImage& img, const Mask& mask);

/// Single color channel viewed as a grayscale image.
enum class Channel { r, g, b };
GrayImage extract_channel(const RgbImage& img, Channel c);

}  // namespace topo
