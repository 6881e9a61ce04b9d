#pragma once
/**
 * @file curves.hpp
 * @brief Persistence curves: the generalized curve functional and the Betti
 *        and entropy instances, assembled into PC feature vectors.
 *
 * Curves are sampled on the threshold grid t = 0..254, so every curve is a
 * vector of length 255.  Essential classes use the finite death surrogate
 * 256 and are therefore alive at every grid point.
 */

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "topo/image.hpp"
#include "topo/persistence.hpp"

namespace topo {

inline constexpr int kCurveSamples = 255;

using CurveVector = std::vector<double>;  // length kCurveSamples

/// psi(D; b, d, t); must vanish on the diagonal (b == d).  Deaths arrive
/// already substituted with the finite surrogate.
using PointFunction =
    std::function<double(const PersistenceDiagram&, double, double, double)>;

/// Statistic over a multiset of reals; must map the empty set to 0.
using Statistic = std::function<double(std::span<const double>)>;

/// Generalized persistence curve: entry t is T({psi(D;b,d,t) : b <= t < d}).
CurveVector persistence_curve(const PersistenceDiagram& d,
                              const PointFunction& psi, const Statistic& stat);

/// psi == 1 with T = sum: counts points alive at t.  By the Fundamental
/// Lemma this equals the Betti number of the threshold image at every t.
CurveVector betti_curve(const PersistenceDiagram& d);

/// Entropy curve: sum over alive points of -(l/L) ln(l/L) with l = d - b and
/// L the diagram's total persistence (natural log, surrogate deaths).
CurveVector entropy_curve(const PersistenceDiagram& d);

/// PC-RGB: Betti curves beta0, beta1 for each of R, G, B; 255*3*2 = 1530.
std::vector<double> pc_rgb(const RgbImage& img);

/// PC-XYZ: beta0, beta1, E0, E1 on the X channel; 255*2*2 = 1020.
std::vector<double> pc_xyz(const RgbImage& img);

/// CSV export, header "t,value", one row per grid point.
void write_curve_csv(std::ostream& out, const CurveVector& curve);

}  // namespace topo
