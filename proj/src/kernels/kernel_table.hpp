#pragma once
// Internal dispatch table shared by the kernel variants.

#include <cstddef>
#include <cstdint>

namespace topo::kernels::detail {

struct KernelTable {
  void (*gray_from_rgb)(const std::uint8_t*, const std::uint8_t*,
                        const std::uint8_t*, float*, std::size_t);
  void (*xyz_from_rgb)(const std::uint8_t*, const std::uint8_t*,
                       const std::uint8_t*, float*, float*, float*,
                       std::size_t);
  void (*threshold_le)(const float*, float, std::uint8_t*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  double (*sum)(const float*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  void (*central_moments)(const double*, std::size_t, double, double[3]);
};

// XYZ (D65) matrix rows; shared so all variants use identical constants.
inline constexpr float kXyzRow0[3] = {0.4124f, 0.3576f, 0.1805f};
inline constexpr float kXyzRow1[3] = {0.2126f, 0.7152f, 0.0722f};
inline constexpr float kXyzRow2[3] = {0.0193f, 0.1192f, 0.9505f};

const KernelTable& scalar_table();
const KernelTable* avx2_table();  // nullptr when not compiled in
const KernelTable* neon_table();  // nullptr when not compiled in

}  // namespace topo::kernels::detail
