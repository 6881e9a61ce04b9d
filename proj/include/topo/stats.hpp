#pragma once
/**
 * @file stats.hpp
 * @brief Persistence statistics: distributional summaries of the midlife
 *        and normalized-lifespan multisets plus persistence entropy.
 *
 * Essential classes participate with the finite death surrogate 256.
 */

#include <array>
#include <string_view>
#include <vector>

#include "topo/image.hpp"
#include "topo/persistence.hpp"

namespace topo {

inline constexpr int kPsLength = 19;

/// Sum of lifespans d - b (surrogate deaths); 0 for an empty diagram.
double total_persistence(const PersistenceDiagram& d);

/// Midlife (b + d) / 2 of every point.
std::vector<double> midlife_set(const PersistenceDiagram& d);

/// Normalized lifespans (d - b) / L; entries sum to 1 when nonempty.
std::vector<double> lifespan_set(const PersistenceDiagram& d);

/// Shannon entropy (natural log) of the normalized lifespan distribution.
double persistence_entropy(const PersistenceDiagram& d);

/// The 19-entry PS vector.  Fixed order: for midlife then lifespan --
/// mean, std (sample, n-1), skewness, kurtosis (Pearson, non-excess),
/// median, 25th percentile, 75th percentile, IQR -- then persistence
/// entropy, total persistence, point count.  Quantiles interpolate linearly
/// between order statistics (inclusive scheme).  Degenerate inputs follow
/// the zero conventions: empty diagram gives the zero vector; singleton or
/// zero-variance sets give std = skewness = kurtosis = 0.
std::array<double, kPsLength> ps_vector(const PersistenceDiagram& d);

/// Entry names, in ps_vector order.
const std::array<std::string_view, kPsLength>& ps_entry_names();

/// PS-RGB / PS-XYZ: ps_vector of (P0, P1) per channel; 19*2*3 = 114 each.
std::vector<double> ps_rgb(const RgbImage& img);
std::vector<double> ps_xyz(const RgbImage& img);

}  // namespace topo
