#pragma once
/**
 * @file cubical.hpp
 * @brief Binary images as cubical complexes: thresholding, connected
 *        components, and Betti numbers.
 *
 * A white pixel stands for a filled unit square together with its edges and
 * vertices, so white regions are 8-connected (diagonal squares share a
 * vertex) and the complementary black holes are 4-connected.  beta1 counts
 * only bounded black components; anything reaching the image border belongs
 * to the unbounded background.
 */

#include <cstdint>
#include <vector>

#include "topo/image.hpp"

namespace topo {

enum class Connectivity { four = 4, eight = 8 };
enum class TargetColor { black, white };

struct ComponentLabeling {
  int width = 0;
  int height = 0;
  std::vector<std::int32_t> labels;  // 0 = not target; components are 1..count
  int count = 0;

  std::int32_t at(int x, int y) const {
    return labels[std::size_t(y) * width + x];
  }
};

struct BettiNumbers {
  int b0 = 0;
  int b1 = 0;
  bool operator==(const BettiNumbers&) const = default;
};

/// Sublevel threshold: bit is 1 iff value <= t.  Throws on t outside [0,255].
BinaryImage threshold(const GrayImage& img, int t);

/// Connected-component labeling of the target color.  Labels are assigned
/// in row-major order of each component's first pixel.
ComponentLabeling label_components(const BinaryImage& img, Connectivity conn,
                                   TargetColor target);

/// beta0 = white components (8-connectivity); beta1 = black components
/// (4-connectivity) that do not touch the image border.
BettiNumbers betti(const BinaryImage& img);

/// Euler characteristic V - E + F of the white cubical complex.
/// Equals beta0 - beta1 for these complexes.
long long euler_characteristic(const BinaryImage& img);

}  // namespace topo
