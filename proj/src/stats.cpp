#include "topo/stats.hpp"

#include <algorithm>
#include <cmath>

#include "topo/kernels.hpp"

namespace topo {
namespace {

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / double(v.size());
}

// Inclusive linear-interpolation quantile over a sorted sample.
double quantile_sorted(const std::vector<double>& sorted, double q) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double h = q * double(n - 1);
  const std::size_t lo = std::size_t(std::floor(h));
  const std::size_t hi = std::min(lo + 1, n - 1);
  const double frac = h - double(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

struct DistributionSummary {
  double mean, stddev, skewness, kurtosis, median, q25, q75, iqr;
};

DistributionSummary summarize(const std::vector<double>& v) {
  DistributionSummary s{};
  const std::size_t n = v.size();
  if (n == 0) return s;

  s.mean = mean_of(v);
  double m[3];
  kernels::central_moments(v.data(), n, s.mean, m);
  const double var_pop = m[0] / double(n);
  s.stddev = n > 1 ? std::sqrt(m[0] / double(n - 1)) : 0.0;
  if (var_pop > 0.0) {
    s.skewness = (m[1] / double(n)) / std::pow(var_pop, 1.5);
    s.kurtosis = (m[2] / double(n)) / (var_pop * var_pop);
  }

  std::vector<double> sorted(v);
  std::sort(sorted.begin(), sorted.end());
  s.median = quantile_sorted(sorted, 0.5);
  s.q25 = quantile_sorted(sorted, 0.25);
  s.q75 = quantile_sorted(sorted, 0.75);
  s.iqr = s.q75 - s.q25;
  return s;
}

}  // namespace

double total_persistence(const PersistenceDiagram& d) {
  double total = 0.0;
  for (const auto& pt : d.points) {
    total += double(finite_death(pt) - pt.birth);
  }
  return total;
}

std::vector<double> midlife_set(const PersistenceDiagram& d) {
  std::vector<double> out;
  out.reserve(d.points.size());
  for (const auto& pt : d.points) {
    out.push_back((double(pt.birth) + double(finite_death(pt))) / 2.0);
  }
  return out;
}

std::vector<double> lifespan_set(const PersistenceDiagram& d) {
  std::vector<double> out;
  if (d.points.empty()) return out;
  const double total = total_persistence(d);
  out.reserve(d.points.size());
  for (const auto& pt : d.points) {
    out.push_back(double(finite_death(pt) - pt.birth) / total);
  }
  return out;
}

double persistence_entropy(const PersistenceDiagram& d) {
  double entropy = 0.0;
  for (double p : lifespan_set(d)) {
    entropy -= p * std::log(p);
  }
  return entropy;
}

std::array<double, kPsLength> ps_vector(const PersistenceDiagram& d) {
  std::array<double, kPsLength> out{};
  if (d.points.empty()) return out;

  const auto pack = [](const DistributionSummary& s, double* slot) {
    slot[0] = s.mean;
    slot[1] = s.stddev;
    slot[2] = s.skewness;
    slot[3] = s.kurtosis;
    slot[4] = s.median;
    slot[5] = s.q25;
    slot[6] = s.q75;
    slot[7] = s.iqr;
  };
  pack(summarize(midlife_set(d)), out.data());
  pack(summarize(lifespan_set(d)), out.data() + 8);
  out[16] = persistence_entropy(d);
  out[17] = total_persistence(d);
  out[18] = double(d.points.size());
  return out;
}

const std::array<std::string_view, kPsLength>& ps_entry_names() {
  static const std::array<std::string_view, kPsLength> names = {
      "mid_mean",     "mid_std",     "mid_skewness",  "mid_kurtosis",
      "mid_median",   "mid_q25",     "mid_q75",       "mid_iqr",
      "life_mean",    "life_std",    "life_skewness", "life_kurtosis",
      "life_median",  "life_q25",    "life_q75",      "life_iqr",
      "entropy",      "total_persistence",            "count",
  };
  return names;
}

namespace {

std::vector<double> ps_from_channels(const std::vector<GrayImage>& channels) {
  std::vector<double> out;
  out.reserve(channels.size() * 2 * kPsLength);
  for (const GrayImage& channel : channels) {
    const DiagramPair pair = sublevel_persistence(channel);
    for (const auto* diagram : {&pair.p0, &pair.p1}) {
      const auto ps = ps_vector(*diagram);
      out.insert(out.end(), ps.begin(), ps.end());
    }
  }
  return out;
}

}  // namespace

std::vector<double> ps_rgb(const RgbImage& img) {
  return ps_from_channels({extract_channel(img, Channel::r),
                           extract_channel(img, Channel::g),
                           extract_channel(img, Channel::b)});
}

std::vector<double> ps_xyz(const RgbImage& img) {
  auto [x, y, z] = rgb_to_xyz(img);
  return ps_from_channels({std::move(x), std::move(y), std::move(z)});
}

}  // namespace topo
