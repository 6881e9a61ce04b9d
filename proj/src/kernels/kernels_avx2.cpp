// AVX2 kernel variants.  This translation unit is compiled with -mavx2;
// nothing here runs unless dispatch verified CPU support first.

#include "kernel_table.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace topo::kernels::detail {
namespace {

inline __m256 load8_u8_as_ps(const std::uint8_t* p) {
  const __m128i bytes = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(p));
  return _mm256_cvtepi32_ps(_mm256_cvtepu8_epi32(bytes));
}

// Lane-order horizontal sum; keeps the reduction deterministic.
inline double hsum_pd(__m256d v) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, v);
  return ((lane[0] + lane[1]) + lane[2]) + lane[3];
}

void gray_from_rgb_avx2(const std::uint8_t* r, const std::uint8_t* g,
                        const std::uint8_t* b, float* out, std::size_t n) {
  const __m256 three = _mm256_set1_ps(3.0f);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m128i r8 = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(r + i));
    const __m128i g8 = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(g + i));
    const __m128i b8 = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(b + i));
    const __m256i sum = _mm256_add_epi32(
        _mm256_add_epi32(_mm256_cvtepu8_epi32(r8), _mm256_cvtepu8_epi32(g8)),
        _mm256_cvtepu8_epi32(b8));
    _mm256_storeu_ps(out + i, _mm256_div_ps(_mm256_cvtepi32_ps(sum), three));
  }
  for (; i < n; ++i) {
    out[i] = float(int(r[i]) + int(g[i]) + int(b[i])) / 3.0f;
  }
}

void xyz_from_rgb_avx2(const std::uint8_t* r, const std::uint8_t* g,
                       const std::uint8_t* b, float* x, float* y, float* z,
                       std::size_t n) {
  const __m256 zero = _mm256_setzero_ps();
  const __m256 hi = _mm256_set1_ps(255.0f);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 rf = load8_u8_as_ps(r + i);
    const __m256 gf = load8_u8_as_ps(g + i);
    const __m256 bf = load8_u8_as_ps(b + i);
    // Same association as the scalar kernel: (r*c0 + g*c1) + b*c2.
    const __m256 xv = _mm256_add_ps(
        _mm256_add_ps(_mm256_mul_ps(rf, _mm256_set1_ps(kXyzRow0[0])),
                      _mm256_mul_ps(gf, _mm256_set1_ps(kXyzRow0[1]))),
        _mm256_mul_ps(bf, _mm256_set1_ps(kXyzRow0[2])));
    const __m256 yv = _mm256_add_ps(
        _mm256_add_ps(_mm256_mul_ps(rf, _mm256_set1_ps(kXyzRow1[0])),
                      _mm256_mul_ps(gf, _mm256_set1_ps(kXyzRow1[1]))),
        _mm256_mul_ps(bf, _mm256_set1_ps(kXyzRow1[2])));
    const __m256 zv = _mm256_add_ps(
        _mm256_add_ps(_mm256_mul_ps(rf, _mm256_set1_ps(kXyzRow2[0])),
                      _mm256_mul_ps(gf, _mm256_set1_ps(kXyzRow2[1]))),
        _mm256_mul_ps(bf, _mm256_set1_ps(kXyzRow2[2])));
    _mm256_storeu_ps(x + i, _mm256_min_ps(_mm256_max_ps(xv, zero), hi));
    _mm256_storeu_ps(y + i, _mm256_min_ps(_mm256_max_ps(yv, zero), hi));
    _mm256_storeu_ps(z + i, _mm256_min_ps(_mm256_max_ps(zv, zero), hi));
  }
  if (i < n) {
    scalar_table().xyz_from_rgb(r + i, g + i, b + i, x + i, y + i, z + i,
                                n - i);
  }
}

void threshold_le_avx2(const float* v, float t, std::uint8_t* out,
                       std::size_t n) {
  const __m256 tv = _mm256_set1_ps(t);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 cmp = _mm256_cmp_ps(_mm256_loadu_ps(v + i), tv, _CMP_LE_OQ);
    const unsigned mask = unsigned(_mm256_movemask_ps(cmp));
    for (unsigned lane = 0; lane < 8; ++lane) {
      out[i + lane] = (mask >> lane) & 1u;
    }
  }
  for (; i < n; ++i) out[i] = v[i] <= t ? 1 : 0;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d yi = _mm256_loadu_pd(y + i);
    const __m256d xi = _mm256_loadu_pd(x + i);
    _mm256_storeu_pd(y + i, _mm256_add_pd(yi, _mm256_mul_pd(av, xi)));
  }
  for (; i < n; ++i) y[i] = y[i] + a * x[i];
}

double sum_avx2(const float* v, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 f = _mm256_loadu_ps(v + i);
    acc0 = _mm256_add_pd(acc0, _mm256_cvtps_pd(_mm256_castps256_ps128(f)));
    acc1 = _mm256_add_pd(acc1, _mm256_cvtps_pd(_mm256_extractf128_ps(f, 1)));
  }
  double total = hsum_pd(acc0) + hsum_pd(acc1);
  for (; i < n; ++i) total += double(v[i]);
  return total;
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(
        acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  double total = hsum_pd(acc);
  for (; i < n; ++i) total += a[i] * b[i];
  return total;
}

void central_moments_avx2(const double* v, std::size_t n, double mean,
                          double out[3]) {
  const __m256d mu = _mm256_set1_pd(mean);
  __m256d s2 = _mm256_setzero_pd();
  __m256d s3 = _mm256_setzero_pd();
  __m256d s4 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(v + i), mu);
    const __m256d d2 = _mm256_mul_pd(d, d);
    s2 = _mm256_add_pd(s2, d2);
    s3 = _mm256_add_pd(s3, _mm256_mul_pd(d2, d));
    s4 = _mm256_add_pd(s4, _mm256_mul_pd(d2, d2));
  }
  double r2 = hsum_pd(s2), r3 = hsum_pd(s3), r4 = hsum_pd(s4);
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

const KernelTable* avx2_table() {
  static const KernelTable table = {
      gray_from_rgb_avx2, xyz_from_rgb_avx2, threshold_le_avx2,
      axpy_avx2,          sum_avx2,          dot_avx2,
      central_moments_avx2,
  };
  return &table;
}

}  // namespace topo::kernels::detail

#else

namespace topo::kernels::detail {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace topo::kernels::detail

#endif
