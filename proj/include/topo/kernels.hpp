#pragma once
/**
 * @file kernels.hpp
 * @brief Data-parallel arithmetic kernels with runtime ISA dispatch.
 *
 * Every kernel has a scalar reference implementation plus SIMD variants
 * (AVX2 on x86-64, NEON on aarch64) selected once at startup from CPU
 * capabilities.  Elementwise kernels are bit-exact across variants; the
 * reduction kernels may reassociate and agree to ~1e-12 relative.
 */

#include <cstddef>
#include <cstdint>

namespace topo::kernels {

enum class Isa { scalar, avx2, neon };

/// ISA whose kernels are currently active.
Isa active_isa();

/// Best ISA supported by this process (what dispatch picks by default).
Isa best_supported_isa();

/// Force a specific ISA (used by the equivalence tests).
/// Returns false and leaves the dispatch unchanged if unsupported here.
bool set_isa(Isa isa);

// ---------------------------------------------------------------------------
// Elementwise kernels (bit-exact across ISAs)
// ---------------------------------------------------------------------------

/// out[i] = (r[i] + g[i] + b[i]) / 3.0f, the channel-average grayscale.
void gray_from_rgb(const std::uint8_t* r, const std::uint8_t* g,
                   const std::uint8_t* b, float* out, std::size_t n);

/// sRGB -> XYZ (D65) linear map applied to raw 0-255 channel values,
/// each output clamped to [0, 255].
void xyz_from_rgb(const std::uint8_t* r, const std::uint8_t* g,
                  const std::uint8_t* b, float* x, float* y, float* z,
                  std::size_t n);

/// out[i] = (v[i] <= t) ? 1 : 0.
void threshold_le(const float* v, float t, std::uint8_t* out, std::size_t n);

/// y[i] += a * x[i].
void axpy(double a, const double* x, double* y, std::size_t n);

// ---------------------------------------------------------------------------
// Reductions (accumulation order may differ across ISAs)
// ---------------------------------------------------------------------------

/// Sum of float values accumulated in double.
double sum(const float* v, std::size_t n);

/// Dot product of double vectors.
double dot(const double* a, const double* b, std::size_t n);

/// Central power sums around a given mean:
/// out[0] = sum (v-mean)^2, out[1] = sum (v-mean)^3, out[2] = sum (v-mean)^4.
void central_moments(const double* v, std::size_t n, double mean,
                     double out[3]);

}  // namespace topo::kernels
