#pragma once
// Seeded randomness helpers that behave identically on every platform
// (std::shuffle and the std distributions are implementation-defined).

#include <cstdint>
#include <random>
#include <vector>

namespace topo::detail {

inline void shuffle_indices(std::vector<std::size_t>& idx,
                            std::mt19937_64& rng) {
  for (std::size_t i = idx.size(); i > 1; --i) {
    const std::size_t j = std::size_t(rng() % i);
    std::swap(idx[i - 1], idx[j]);
  }
}

/// Uniform draw in [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64& rng) {
  return double(rng() >> 11) * 0x1.0p-53;
}

/// Uniform draw in [-scale, scale].
inline double uniform_symmetric(std::mt19937_64& rng, double scale) {
  return scale * (2.0 * uniform01(rng) - 1.0);
}

}  // namespace topo::detail
