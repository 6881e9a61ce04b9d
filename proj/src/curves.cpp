#include "topo/curves.hpp"

#include <cmath>
#include <ostream>

namespace topo {
namespace {

// Adds v on the alive interval [b, d) clamped to the grid.
template <typename T>
void add_interval(std::vector<T>& diff, int b, int d, T v) {
  const int lo = std::max(b, 0);
  const int hi = std::min(d, kCurveSamples);
  if (lo >= hi) return;
  diff[std::size_t(lo)] += v;
  diff[std::size_t(hi)] -= v;
}

template <typename T>
CurveVector prefix_sum(const std::vector<T>& diff) {
  CurveVector out(kCurveSamples, 0.0);
  T run = T(0);
  for (int t = 0; t < kCurveSamples; ++t) {
    run += diff[std::size_t(t)];
    out[std::size_t(t)] = double(run);
  }
  return out;
}

}  // namespace

CurveVector persistence_curve(const PersistenceDiagram& d,
                              const PointFunction& psi,
                              const Statistic& stat) {
  CurveVector out(kCurveSamples, 0.0);
  std::vector<double> alive;
  alive.reserve(d.points.size());
  for (int t = 0; t < kCurveSamples; ++t) {
    alive.clear();
    for (const auto& pt : d.points) {
      const int death = finite_death(pt);
      if (pt.birth <= t && death > t) {
        alive.push_back(psi(d, double(pt.birth), double(death), double(t)));
      }
    }
    out[std::size_t(t)] = stat(std::span<const double>(alive));
  }
  return out;
}

CurveVector betti_curve(const PersistenceDiagram& d) {
  std::vector<long long> diff(std::size_t(kCurveSamples) + 1, 0);
  for (const auto& pt : d.points) {
    add_interval<long long>(diff, pt.birth, finite_death(pt), 1);
  }
  return prefix_sum(diff);
}

CurveVector entropy_curve(const PersistenceDiagram& d) {
  CurveVector out(kCurveSamples, 0.0);
  if (d.points.empty()) return out;

  double total = 0.0;
  for (const auto& pt : d.points) {
    total += double(finite_death(pt) - pt.birth);
  }
  // Accumulate per alive interval; only additions, so entries stay >= 0 and
  // thresholds past every death are exactly zero.
  for (const auto& pt : d.points) {
    const double q = double(finite_death(pt) - pt.birth) / total;
    const double term = -q * std::log(q);
    const int hi = std::min(finite_death(pt), kCurveSamples);
    for (int t = std::max(pt.birth, 0); t < hi; ++t) {
      out[std::size_t(t)] += term;
    }
  }
  return out;
}

std::vector<double> pc_rgb(const RgbImage& img) {
  std::vector<double> out;
  out.reserve(std::size_t(kCurveSamples) * 6);
  for (Channel c : {Channel::r, Channel::g, Channel::b}) {
    const DiagramPair pair = sublevel_persistence(extract_channel(img, c));
    for (const auto* diagram : {&pair.p0, &pair.p1}) {
      const CurveVector curve = betti_curve(*diagram);
      out.insert(out.end(), curve.begin(), curve.end());
    }
  }
  return out;
}

std::vector<double> pc_xyz(const RgbImage& img) {
  const auto [x, y, z] = rgb_to_xyz(img);
  (void)y;
  (void)z;
  const DiagramPair pair = sublevel_persistence(x);
  std::vector<double> out;
  out.reserve(std::size_t(kCurveSamples) * 4);
  for (const CurveVector& curve :
       {betti_curve(pair.p0), betti_curve(pair.p1), entropy_curve(pair.p0),
        entropy_curve(pair.p1)}) {
    out.insert(out.end(), curve.begin(), curve.end());
  }
  return out;
}

void write_curve_csv(std::ostream& out, const CurveVector& curve) {
  out << "t,value\n";
  out.precision(17);
  for (int t = 0; t < kCurveSamples; ++t) {
    out << t << ',' << curve[std::size_t(t)] << '\n';
  }
}

}  // namespace topo
