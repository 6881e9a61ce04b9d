// NEON kernel variants for aarch64.

#include "kernel_table.hpp"

#if defined(__aarch64__) || defined(__ARM_NEON)

#include <arm_neon.h>

namespace topo::kernels::detail {
namespace {

inline float32x4_t load4_u8_as_f32(const std::uint8_t* p) {
  // Widen 4 bytes -> u16 -> u32 -> f32.
  uint8x8_t b = vld1_u8(p);  // reads 8, lower 4 used
  uint16x8_t w = vmovl_u8(b);
  uint32x4_t d = vmovl_u16(vget_low_u16(w));
  return vcvtq_f32_u32(d);
}

inline double hsum_f64(float64x2_t v) { return vgetq_lane_f64(v, 0) + vgetq_lane_f64(v, 1); }

void gray_from_rgb_neon(const std::uint8_t* r, const std::uint8_t* g,
                        const std::uint8_t* b, float* out, std::size_t n) {
  const float32x4_t three = vdupq_n_f32(3.0f);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    uint16x8_t sum = vaddl_u8(vld1_u8(r + i), vld1_u8(g + i));
    sum = vaddw_u8(sum, vld1_u8(b + i));
    const float32x4_t lo = vcvtq_f32_u32(vmovl_u16(vget_low_u16(sum)));
    const float32x4_t hi = vcvtq_f32_u32(vmovl_u16(vget_high_u16(sum)));
    vst1q_f32(out + i, vdivq_f32(lo, three));
    vst1q_f32(out + i + 4, vdivq_f32(hi, three));
  }
  for (; i < n; ++i) {
    out[i] = float(int(r[i]) + int(g[i]) + int(b[i])) / 3.0f;
  }
}

void xyz_from_rgb_neon(const std::uint8_t* r, const std::uint8_t* g,
                       const std::uint8_t* b, float* x, float* y, float* z,
                       std::size_t n) {
  const float32x4_t zero = vdupq_n_f32(0.0f);
  const float32x4_t hi = vdupq_n_f32(255.0f);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float32x4_t rf = load4_u8_as_f32(r + i);
    const float32x4_t gf = load4_u8_as_f32(g + i);
    const float32x4_t bf = load4_u8_as_f32(b + i);
    // Same association as the scalar kernel; plain mul+add, no fused ops.
    float32x4_t xv = vaddq_f32(vaddq_f32(vmulq_n_f32(rf, kXyzRow0[0]),
                                         vmulq_n_f32(gf, kXyzRow0[1])),
                               vmulq_n_f32(bf, kXyzRow0[2]));
    float32x4_t yv = vaddq_f32(vaddq_f32(vmulq_n_f32(rf, kXyzRow1[0]),
                                         vmulq_n_f32(gf, kXyzRow1[1])),
                               vmulq_n_f32(bf, kXyzRow1[2]));
    float32x4_t zv = vaddq_f32(vaddq_f32(vmulq_n_f32(rf, kXyzRow2[0]),
                                         vmulq_n_f32(gf, kXyzRow2[1])),
                               vmulq_n_f32(bf, kXyzRow2[2]));
    vst1q_f32(x + i, vminq_f32(vmaxq_f32(xv, zero), hi));
    vst1q_f32(y + i, vminq_f32(vmaxq_f32(yv, zero), hi));
    vst1q_f32(z + i, vminq_f32(vmaxq_f32(zv, zero), hi));
  }
  if (i < n) {
    scalar_table().xyz_from_rgb(r + i, g + i, b + i, x + i, y + i, z + i,
                                n - i);
  }
}

void threshold_le_neon(const float* v, float t, std::uint8_t* out,
                       std::size_t n) {
  const float32x4_t tv = vdupq_n_f32(t);
  const uint32x4_t one = vdupq_n_u32(1);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const uint32x4_t m = vandq_u32(vcleq_f32(vld1q_f32(v + i), tv), one);
    out[i + 0] = std::uint8_t(vgetq_lane_u32(m, 0));
    out[i + 1] = std::uint8_t(vgetq_lane_u32(m, 1));
    out[i + 2] = std::uint8_t(vgetq_lane_u32(m, 2));
    out[i + 3] = std::uint8_t(vgetq_lane_u32(m, 3));
  }
  for (; i < n; ++i) out[i] = v[i] <= t ? 1 : 0;
}

void axpy_neon(double a, const double* x, double* y, std::size_t n) {
  const float64x2_t av = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t yi = vld1q_f64(y + i);
    const float64x2_t xi = vld1q_f64(x + i);
    vst1q_f64(y + i, vaddq_f64(yi, vmulq_f64(av, xi)));
  }
  for (; i < n; ++i) y[i] = y[i] + a * x[i];
}

double sum_neon(const float* v, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float32x4_t f = vld1q_f32(v + i);
    acc0 = vaddq_f64(acc0, vcvt_f64_f32(vget_low_f32(f)));
    acc1 = vaddq_f64(acc1, vcvt_f64_f32(vget_high_f32(f)));
  }
  double total = hsum_f64(acc0) + hsum_f64(acc1);
  for (; i < n; ++i) total += double(v[i]);
  return total;
}

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  }
  double total = hsum_f64(acc);
  for (; i < n; ++i) total += a[i] * b[i];
  return total;
}

void central_moments_neon(const double* v, std::size_t n, double mean,
                          double out[3]) {
  const float64x2_t mu = vdupq_n_f64(mean);
  float64x2_t s2 = vdupq_n_f64(0.0);
  float64x2_t s3 = vdupq_n_f64(0.0);
  float64x2_t s4 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(v + i), mu);
    const float64x2_t d2 = vmulq_f64(d, d);
    s2 = vaddq_f64(s2, d2);
    s3 = vaddq_f64(s3, vmulq_f64(d2, d));
    s4 = vaddq_f64(s4, vmulq_f64(d2, d2));
  }
  double r2 = hsum_f64(s2), r3 = hsum_f64(s3), r4 = hsum_f64(s4);
  for (; i < n; ++i) {
    const double d = v[i] - mean;
    const double d2 = d * d;
    r2 += d2;
    r3 += d2 * d;
    r4 += d2 * d2;
  }
  out[0] = r2;
  out[1] = r3;
  out[2] = r4;
}

}  // namespace

const KernelTable* neon_table() {
  static const KernelTable table = {
      gray_from_rgb_neon, xyz_from_rgb_neon, threshold_le_neon,
      axpy_neon,          sum_neon,          dot_neon,
      central_moments_neon,
  };
  return &table;
}

}  // namespace topo::kernels::detail

#else

namespace topo::kernels::detail {
const KernelTable* neon_table() { return nullptr; }
}  // namespace topo::kernels::detail

#endif
