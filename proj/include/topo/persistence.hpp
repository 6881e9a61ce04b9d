#pragma once
/**
 * @file persistence.hpp
 * @brief Sublevel-set persistent homology of grayscale images over Z2.
 *
 * A pixel enters the filtration at the smallest integer threshold t with
 * value <= t, i.e. at ceil(value).  Dimension 0 runs elder-rule union-find
 * over white pixels (8-connectivity).  Dimension 1 runs the dual union-find
 * over the shrinking black complement (4-connectivity plus a virtual
 * outside node), which yields exactly the bounded-hole pairing.
 *
 * The acceptance contract is the Fundamental Lemma: for every threshold t,
 * |{(b,d) : b <= t < d}| equals the Betti number of threshold(img, t)
 * computed independently by cubical::betti.
 */

#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include "topo/image.hpp"

namespace topo {

/// Symbolic death value for essential classes.  Distinct from the finite
/// surrogate essential_death_value() used by statistics.
inline constexpr int kInfiniteDeath = std::numeric_limits<int>::max();

struct DiagramPoint {
  int birth = 0;
  int death = 0;  // kInfiniteDeath for essential classes

  bool essential() const { return death == kInfiniteDeath; }
  bool operator==(const DiagramPoint&) const = default;
  auto operator<=>(const DiagramPoint&) const = default;
};

struct PersistenceDiagram {
  int dimension = 0;  // 0 or 1
  std::vector<DiagramPoint> points;  // sorted (birth, death), multiset

  std::size_t size() const { return points.size(); }
};

struct DiagramPair {
  PersistenceDiagram p0;
  PersistenceDiagram p1;
};

/// Finite surrogate substituted for an infinite death wherever statistics
/// require finite lifespans: one past the top threshold 255.
constexpr int essential_death_value() { return 256; }

/// Death with the surrogate applied.
inline int finite_death(const DiagramPoint& p) {
  return p.essential() ? essential_death_value() : p.death;
}

/// 0- and 1-dimensional persistence diagrams of the sublevel filtration.
DiagramPair sublevel_persistence(const GrayImage& img);

/// Exact bottleneck distance by exhaustive matching.  Only diagrams with at
/// most max_points off-diagonal points are accepted (throws
/// std::invalid_argument beyond that); may return infinity when essential
/// point counts differ.
double bottleneck_distance(const PersistenceDiagram& p,
                           const PersistenceDiagram& q,
                           std::size_t max_points = 10);

/// CSV serialization, header "dim,birth,death", death "inf" for essential
/// classes.  Round-trips bit-exact.
void write_diagrams_csv(std::ostream& out,
                        std::span<const PersistenceDiagram> diagrams);
std::vector<PersistenceDiagram> read_diagrams_csv(std::istream& in);

}  // namespace topo
