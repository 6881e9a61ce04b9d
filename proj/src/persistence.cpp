#include "topo/persistence.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace topo {
namespace {

// Entry threshold of each pixel: ceil(value), the smallest integer t with
// value <= t.
std::vector<int> entry_levels(const GrayImage& img) {
  std::vector<int> g(img.pixel_count());
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i] = int(std::ceil(img.values[i]));
  }
  return g;
}

// Elder-rule union-find.  The winner of a merge is fixed by (birth, creator)
// so there is no union-by-rank; path halving keeps finds cheap.
struct ElderForest {
  std::vector<std::int32_t> parent;
  std::vector<std::int32_t> birth;
  std::vector<std::int32_t> creator;

  explicit ElderForest(std::size_t n)
      : parent(n, -1), birth(n, 0), creator(n, 0) {}

  void make_set(std::int32_t v, std::int32_t b, std::int32_t c) {
    parent[std::size_t(v)] = v;
    birth[std::size_t(v)] = b;
    creator[std::size_t(v)] = c;
  }

  bool contains(std::int32_t v) const { return parent[std::size_t(v)] >= 0; }

  std::int32_t find(std::int32_t v) {
    while (parent[std::size_t(v)] != v) {
      parent[std::size_t(v)] = parent[std::size_t(parent[std::size_t(v)])];
      v = parent[std::size_t(v)];
    }
    return v;
  }
};

// Pixels bucketed by level so processing is (level, row-major) ordered.
std::vector<std::int32_t> counting_sort_by_level(const std::vector<int>& key,
                                                 int buckets) {
  std::vector<std::int32_t> start(std::size_t(buckets) + 1, 0);
  for (int k : key) ++start[std::size_t(k) + 1];
  for (int i = 0; i < buckets; ++i) start[std::size_t(i) + 1] += start[std::size_t(i)];
  std::vector<std::int32_t> order(key.size());
  std::vector<std::int32_t> cursor(start.begin(), start.end() - 1);
  for (std::size_t p = 0; p < key.size(); ++p) {
    order[std::size_t(cursor[std::size_t(key[p])]++)] = std::int32_t(p);
  }
  return order;
}

PersistenceDiagram compute_dim0(const GrayImage& img,
                                const std::vector<int>& g) {
  const int w = img.width;
  const int h = img.height;
  const std::size_t n = img.pixel_count();

  PersistenceDiagram diagram;
  diagram.dimension = 0;

  ElderForest forest(n);
  const std::vector<std::int32_t> order = counting_sort_by_level(g, 256);

  constexpr int kOff8[8][2] = {{-1, -1}, {0, -1}, {1, -1}, {-1, 0},
                               {1, 0},   {-1, 1}, {0, 1},  {1, 1}};
  for (std::int32_t p : order) {
    const int level = g[std::size_t(p)];
    forest.make_set(p, level, p);
    const int px = p % w;
    const int py = p / w;
    for (const auto& off : kOff8) {
      const int nx = px + off[0];
      const int ny = py + off[1];
      if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
      const std::int32_t q = std::int32_t(ny * w + nx);
      if (!forest.contains(q)) continue;
      std::int32_t ra = forest.find(p);
      std::int32_t rb = forest.find(q);
      if (ra == rb) continue;
      // Elder rule: earlier birth survives; equal births resolve to the
      // smaller row-major creator index.
      if (std::pair(forest.birth[std::size_t(rb)], forest.creator[std::size_t(rb)]) <
          std::pair(forest.birth[std::size_t(ra)], forest.creator[std::size_t(ra)])) {
        std::swap(ra, rb);
      }
      if (forest.birth[std::size_t(rb)] < level) {
        diagram.points.push_back({forest.birth[std::size_t(rb)], level});
      }
      forest.parent[std::size_t(rb)] = ra;
    }
  }

  // Surviving roots are the essential classes; the final image (all pixels
  // white at 255) is connected, so exactly one remains.
  std::vector<std::uint8_t> seen(n, 0);
  for (std::size_t p = 0; p < n; ++p) {
    const std::int32_t root = forest.find(std::int32_t(p));
    if (!seen[std::size_t(root)]) {
      seen[std::size_t(root)] = 1;
      diagram.points.push_back({forest.birth[std::size_t(root)], kInfiniteDeath});
    }
  }

  std::sort(diagram.points.begin(), diagram.points.end());
  return diagram;
}

// Dimension 1 by duality: a hole of the white sublevel set is a bounded
// 4-connected component of the black complement.  Run union-find over the
// black superlevel filtration (threshold decreasing), with a virtual outside
// node that border pixels attach to; each merge of a younger black branch
// into an older one is a hole born when the regions separated (forward time)
// and dead when the younger region was last black.
PersistenceDiagram compute_dim1(const GrayImage& img,
                                const std::vector<int>& g) {
  const int w = img.width;
  const int h = img.height;
  const std::size_t n = img.pixel_count();
  const std::int32_t outside = std::int32_t(n);

  PersistenceDiagram diagram;
  diagram.dimension = 1;

  // Pixel p is black exactly for thresholds t <= g[p] - 1.
  // Process levels downward: bucket index = 255 - g[p] gives descending
  // reverse-entry order with row-major order inside each level.
  std::vector<int> bucket(n);
  for (std::size_t p = 0; p < n; ++p) bucket[p] = 255 - g[p];
  const std::vector<std::int32_t> order = counting_sort_by_level(bucket, 256);

  ElderForest forest(n + 1);
  forest.make_set(outside, 256, -1);  // eldest; never dies

  const auto merge = [&](std::int32_t a, std::int32_t b, int level,
                         PersistenceDiagram& out) {
    std::int32_t ra = forest.find(a);
    std::int32_t rb = forest.find(b);
    if (ra == rb) return;
    // Reverse elder rule: the branch black for longer (larger reverse birth)
    // survives; ties resolve to the smaller creator index.
    if (std::pair(-forest.birth[std::size_t(rb)], forest.creator[std::size_t(rb)]) <
        std::pair(-forest.birth[std::size_t(ra)], forest.creator[std::size_t(ra)])) {
      std::swap(ra, rb);
    }
    if (forest.birth[std::size_t(rb)] > level) {
      // Hole alive for t in [level+1, reverse_birth]: born when the regions
      // separated, dead once the younger region is fully white.
      out.points.push_back({level + 1, forest.birth[std::size_t(rb)] + 1});
    }
    forest.parent[std::size_t(rb)] = ra;
  };

  constexpr int kOff4[4][2] = {{0, -1}, {-1, 0}, {1, 0}, {0, 1}};
  for (std::int32_t p : order) {
    const int level = g[std::size_t(p)] - 1;  // reverse entry
    forest.make_set(p, level, p);
    const int px = p % w;
    const int py = p / w;
    if (px == 0 || py == 0 || px == w - 1 || py == h - 1) {
      merge(p, outside, level, diagram);
    }
    for (const auto& off : kOff4) {
      const int nx = px + off[0];
      const int ny = py + off[1];
      if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
      const std::int32_t q = std::int32_t(ny * w + nx);
      if (!forest.contains(q)) continue;
      merge(p, q, level, diagram);
    }
  }

  // Everything merges into the outside component eventually, so dimension 1
  // carries no essential classes.
  std::sort(diagram.points.begin(), diagram.points.end());
  return diagram;
}

double linf(const DiagramPoint& a, const DiagramPoint& b) {
  return std::max(std::abs(double(a.birth) - double(b.birth)),
                  std::abs(double(a.death) - double(b.death)));
}

double diagonal_cost(const DiagramPoint& p) {
  return (double(p.death) - double(p.birth)) / 2.0;
}

}  // namespace

DiagramPair sublevel_persistence(const GrayImage& img) {
  if (img.width < 1 || img.height < 1) {
    throw std::invalid_argument("sublevel_persistence: empty image");
  }
  const std::vector<int> g = entry_levels(img);
  return {compute_dim0(img, g), compute_dim1(img, g)};
}

double bottleneck_distance(const PersistenceDiagram& p,
                           const PersistenceDiagram& q,
                           std::size_t max_points) {
  if (p.points.size() > max_points || q.points.size() > max_points) {
    throw std::invalid_argument(
        "bottleneck_distance: diagram exceeds the brute-force size limit");
  }

  std::vector<int> pe, qe;
  std::vector<DiagramPoint> pf, qf;
  for (const auto& pt : p.points) {
    (pt.essential() ? (void)pe.push_back(pt.birth) : (void)pf.push_back(pt));
  }
  for (const auto& pt : q.points) {
    (pt.essential() ? (void)qe.push_back(pt.birth) : (void)qf.push_back(pt));
  }

  // Essential classes can only match each other.
  if (pe.size() != qe.size()) {
    return std::numeric_limits<double>::infinity();
  }
  std::sort(pe.begin(), pe.end());
  std::sort(qe.begin(), qe.end());
  double essential = 0.0;
  for (std::size_t i = 0; i < pe.size(); ++i) {
    essential = std::max(essential, std::abs(double(pe[i]) - double(qe[i])));
  }

  // Exhaustive assignment over the finite points: dp[mask] is the best
  // achievable max-cost with the first i points of pf matched and exactly
  // the Q points in mask consumed (unmatched P/Q points pair with the
  // diagonal).
  const std::size_t m = qf.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dp(std::size_t(1) << m, inf);
  dp[0] = 0.0;
  for (const auto& pi : pf) {
    std::vector<double> next(dp.size(), inf);
    for (std::size_t mask = 0; mask < dp.size(); ++mask) {
      if (dp[mask] == inf) continue;
      next[mask] = std::min(next[mask], std::max(dp[mask], diagonal_cost(pi)));
      for (std::size_t j = 0; j < m; ++j) {
        if (mask & (std::size_t(1) << j)) continue;
        const std::size_t with = mask | (std::size_t(1) << j);
        next[with] = std::min(next[with], std::max(dp[mask], linf(pi, qf[j])));
      }
    }
    dp.swap(next);
  }
  double finite = inf;
  for (std::size_t mask = 0; mask < dp.size(); ++mask) {
    if (dp[mask] == inf) continue;
    double cost = dp[mask];
    for (std::size_t j = 0; j < m; ++j) {
      if (!(mask & (std::size_t(1) << j))) {
        cost = std::max(cost, diagonal_cost(qf[j]));
      }
    }
    finite = std::min(finite, cost);
  }

  return std::max(essential, finite);
}

void write_diagrams_csv(std::ostream& out,
                        std::span<const PersistenceDiagram> diagrams) {
  out << "dim,birth,death\n";
  for (const auto& d : diagrams) {
    for (const auto& pt : d.points) {
      out << d.dimension << ',' << pt.birth << ',';
      if (pt.essential()) {
        out << "inf";
      } else {
        out << pt.death;
      }
      out << '\n';
    }
  }
}

std::vector<PersistenceDiagram> read_diagrams_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "dim,birth,death") {
    throw std::invalid_argument("diagram CSV: bad header");
  }
  std::vector<PersistenceDiagram> result;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string dim_s, birth_s, death_s;
    if (!std::getline(ss, dim_s, ',') || !std::getline(ss, birth_s, ',') ||
        !std::getline(ss, death_s)) {
      throw std::invalid_argument("diagram CSV: bad row '" + line + "'");
    }
    const int dim = std::stoi(dim_s);
    DiagramPoint pt;
    pt.birth = std::stoi(birth_s);
    pt.death = death_s == "inf" ? kInfiniteDeath : std::stoi(death_s);
    auto it = std::find_if(result.begin(), result.end(),
                           [dim](const auto& d) { return d.dimension == dim; });
    if (it == result.end()) {
      result.push_back({dim, {}});
      it = std::prev(result.end());
    }
    it->points.push_back(pt);
  }
  return result;
}

}  // namespace topo
