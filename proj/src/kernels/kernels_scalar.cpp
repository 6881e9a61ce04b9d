// Scalar reference kernels.  These define the semantics; the SIMD variants
// must match them (bit-exact for the elementwise group).  Compiled with
// -ffp-contract=off so no FMA contraction sneaks in.

#include <algorithm>

#include "kernel_table.hpp"

namespace topo::kernels::detail {
namespace {

void gray_from_rgb_scalar(const std::uint8_t* r, const std::uint8_t* g,
                          const std::uint8_t* b, float* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const int s = int(r[i]) + int(g[i]) + int(b[i]);
    out[i] = float(s) / 3.0f;
  }
}

void xyz_from_rgb_scalar(const std::uint8_t* r, const std::uint8_t* g,
                         const std::uint8_t* b, float* x, float* y, float* z,
                         std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const float rf = float(r[i]);
    const float gf = float(g[i]);
    const float bf = float(b[i]);
    // Fixed evaluation order: (r*c0 + g*c1) + b*c2, matching the SIMD code.
    float xv = (rf * kXyzRow0[0] + gf * kXyzRow0[1]) + bf * kXyzRow0[2];
    float yv = (rf * kXyzRow1[0] + gf * kXyzRow1[1]) + bf * kXyzRow1[2];
    float zv = (rf * kXyzRow2[0] + gf * kXyzRow2[1]) + bf * kXyzRow2[2];
    x[i] = std::min(std::max(xv, 0.0f), 255.0f);
    y[i] = std::min(std::max(yv, 0.0f), 255.0f);
    z[i] = std::min(std::max(zv, 0.0f), 255.0f);
  }
}

void threshold_le_scalar(const float* v, float t, std::uint8_t* out,
                         std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = v[i] <= t ? 1 : 0;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + a * x[i];
}

double sum_scalar(const float* v, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += double(v[i]);
  return acc;
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void central_moments_scalar(const double* v, std::size_t n, double mean,
                            double out[3]) {
  double s2 = 0.0, s3 = 0.0, s4 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = v[i] - mean;
    const double d2 = d * d;
    s2 += d2;
    s3 += d2 * d;
    s4 += d2 * d2;
  }
  out[0] = s2;
  out[1] = s3;
  out[2] = s4;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table = {
      gray_from_rgb_scalar, xyz_from_rgb_scalar, threshold_le_scalar,
      axpy_scalar,          sum_scalar,          dot_scalar,
      central_moments_scalar,
  };
  return table;
}

}  // namespace topo::kernels::detail
