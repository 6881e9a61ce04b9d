#include "topo/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "topo/kernels.hpp"

namespace topo {
namespace {

long long cross(const std::pair<long long, long long>& o,
                const std::pair<long long, long long>& a,
                const std::pair<long long, long long>& b) {
  return (a.first - o.first) * (b.second - o.second) -
         (a.second - o.second) * (b.first - o.first);
}

// T'': first step whose successor has more components, T-1 otherwise.
// counts[i] holds the component count of S_{i+1}.
int first_count_increase(std::span<const int> counts) {
  const int steps = int(counts.size());
  for (int t = 1; t < steps; ++t) {
    if (counts[std::size_t(t)] > counts[std::size_t(t) - 1]) return t;
  }
  return steps - 1;
}

// Monotone-chain convex hull, counter-clockwise, collinear points dropped.
std::vector<std::pair<int, int>> convex_hull(
    std::vector<std::pair<int, int>> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const std::size_t n = pts.size();
  if (n <= 2) return pts;

  std::vector<std::pair<int, int>> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {  // lower
    while (k >= 2 && cross({hull[k - 2].first, hull[k - 2].second},
                           {hull[k - 1].first, hull[k - 1].second},
                           {pts[i].first, pts[i].second}) <= 0) {
      --k;
    }
    hull[k++] = pts[i];
  }
  for (std::size_t i = n - 1, lower = k + 1; i-- > 0;) {  // upper
    while (k >= lower && cross({hull[k - 2].first, hull[k - 2].second},
                               {hull[k - 1].first, hull[k - 1].second},
                               {pts[i].first, pts[i].second}) <= 0) {
      --k;
    }
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

}  // namespace

LifeMap life_spans(const GrayImage& gray, const SegmentationConfig& cfg) {
  const int steps = cfg.total_steps;
  const double a =
      kernels::sum(gray.values.data(), gray.pixel_count()) /
      double(gray.pixel_count());

  std::vector<double> thresholds(std::size_t(steps) + 1, 0.0);
  for (int t = 1; t <= steps; ++t) {
    thresholds[std::size_t(t)] = a * (1.0 - double(t) / double(steps));
  }

  LifeMap life;
  life.width = gray.width;
  life.height = gray.height;
  life.spans.resize(gray.pixel_count());
  for (std::size_t i = 0; i < gray.values.size(); ++i) {
    const double v = double(gray.values[i]);
    int span = 0;
    for (int t = steps; t >= 1; --t) {  // first hit from the top is max t
      if (v <= thresholds[std::size_t(t)]) {
        span = t;
        break;
      }
    }
    life.spans[i] = span;
  }
  return life;
}

BinaryImage life_threshold(const LifeMap& life, int t) {
  BinaryImage out;
  out.width = life.width;
  out.height = life.height;
  out.bits.resize(life.spans.size());
  for (std::size_t i = 0; i < life.spans.size(); ++i) {
    out.bits[i] = life.spans[i] >= t ? 1 : 0;
  }
  return out;
}

int select_threshold(std::span<const int> counts,
                     const SegmentationConfig& cfg) {
  if (counts.empty()) {
    throw std::invalid_argument("select_threshold: empty count trace");
  }
  const int steps = int(counts.size());
  const int t_second = first_count_increase(counts);
  int t_prime = 1 + t_second / cfg.divisor;
  t_prime = std::clamp(t_prime, 1, std::max(1, steps - 1));
  return t_prime;
}

double life_score(std::span<const std::pair<int, int>> pixels,
                  const LifeMap& life) {
  const double ox = double(life.width - 1) / 2.0;
  const double oy = double(life.height - 1) / 2.0;

  double d_center = std::numeric_limits<double>::infinity();
  double d_border = std::numeric_limits<double>::infinity();
  long long life_sum = 0;
  for (const auto& [x, y] : pixels) {
    const double dx = double(x) - ox;
    const double dy = double(y) - oy;
    d_center = std::min(d_center, std::sqrt(dx * dx + dy * dy));
    d_border = std::min(
        d_border, double(std::min({x, y, life.width - 1 - x,
                                   life.height - 1 - y})));
    life_sum += life.at(x, y);
  }
  const double near = 1.0 + d_border;
  const double far = 1.0 + d_center;
  return near * near * near * double(life_sum) / (far * far * far);
}

Mask convex_hull_mask(std::span<const std::pair<int, int>> points, int width,
                      int height) {
  Mask mask;
  mask.width = width;
  mask.height = height;
  mask.bits.assign(std::size_t(width) * height, 0);
  if (points.empty()) return mask;

  const auto hull =
      convex_hull(std::vector<std::pair<int, int>>(points.begin(), points.end()));

  if (hull.size() <= 2) {
    // Degenerate hull: pixels whose center lies on the segment (or point).
    const auto [ax, ay] = hull.front();
    const auto [bx, by] = hull.back();
    const int x0 = std::max(0, std::min(ax, bx));
    const int x1 = std::min(width - 1, std::max(ax, bx));
    const int y0 = std::max(0, std::min(ay, by));
    const int y1 = std::min(height - 1, std::max(ay, by));
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        if (cross({ax, ay}, {bx, by}, {x, y}) == 0) mask.set(x, y, true);
      }
    }
    return mask;
  }

  int x0 = width - 1, x1 = 0, y0 = height - 1, y1 = 0;
  for (const auto& [x, y] : hull) {
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  }
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      bool inside = true;
      for (std::size_t i = 0; i < hull.size() && inside; ++i) {
        const auto& a = hull[i];
        const auto& b = hull[(i + 1) % hull.size()];
        inside = cross({a.first, a.second}, {b.first, b.second}, {x, y}) >= 0;
      }
      if (inside) mask.set(x, y, true);
    }
  }
  return mask;
}

SegmentationResult segment(const RgbImage& img,
                           const SegmentationConfig& cfg) {
  SegmentationResult result;
  const GrayImage gray = rgb_to_gray(img);

  const bool constant = std::all_of(
      gray.values.begin(), gray.values.end(),
      [&](float v) { return v == gray.values.front(); });
  if (constant) {
    result.degenerate = true;
    result.mask.width = img.width;
    result.mask.height = img.height;
    result.mask.bits.assign(img.pixel_count(), 1);
    return result;
  }

  const LifeMap life = life_spans(gray, cfg);

  result.component_counts.reserve(std::size_t(cfg.total_steps));
  for (int t = 1; t <= cfg.total_steps; ++t) {
    result.component_counts.push_back(
        label_components(life_threshold(life, t), Connectivity::eight,
                         TargetColor::white)
            .count);
  }

  result.t_second = first_count_increase(result.component_counts);
  result.t_prime = select_threshold(result.component_counts, cfg);

  const BinaryImage selected = life_threshold(life, result.t_prime);
  const ComponentLabeling labeling =
      label_components(selected, Connectivity::eight, TargetColor::white);

  std::vector<std::vector<std::pair<int, int>>> pixels_of(
      std::size_t(labeling.count) + 1);
  for (int y = 0; y < selected.height; ++y) {
    for (int x = 0; x < selected.width; ++x) {
      if (auto l = labeling.at(x, y)) {
        pixels_of[std::size_t(l)].emplace_back(x, y);
      }
    }
  }

  const double min_area = cfg.tiny_fraction * double(img.pixel_count());
  double score_sum = 0.0;
  for (int l = 1; l <= labeling.count; ++l) {
    const auto& px = pixels_of[std::size_t(l)];
    if (double(px.size()) < min_area) continue;
    ComponentScore cs;
    cs.label = l;
    cs.area = int(px.size());
    cs.score = life_score(px, life);
    score_sum += cs.score;
    result.scores.push_back(cs);
  }

  if (!result.scores.empty()) {
    const double mean_score = score_sum / double(result.scores.size());
    bool any_kept = false;
    for (auto& cs : result.scores) {
      cs.kept = cs.score > mean_score;
      any_kept = any_kept || cs.kept;
    }
    if (!any_kept) {
      // All scores tie with the mean (e.g. a single component); keep the
      // best one rather than emit an empty mask.
      auto best = std::max_element(
          result.scores.begin(), result.scores.end(),
          [](const auto& a, const auto& b) { return a.score < b.score; });
      best->kept = true;
    }
  }

  std::vector<std::pair<int, int>> hull_points;
  for (const auto& cs : result.scores) {
    if (!cs.kept) continue;
    const auto& px = pixels_of[std::size_t(cs.label)];
    hull_points.insert(hull_points.end(), px.begin(), px.end());
  }
  result.mask = convex_hull_mask(hull_points, img.width, img.height);
  return result;
}

double iou(const Mask& a, const Mask& b) {
  if (a.width != b.width || a.height != b.height) {
    throw std::invalid_argument("iou: mask dimensions differ");
  }
  long long inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.bits.size(); ++i) {
    const bool av = a.bits[i] != 0;
    const bool bv = b.bits[i] != 0;
    inter += av && bv;
    uni += av || bv;
  }
  if (uni == 0) return 1.0;
  return double(inter) / double(uni);
}

}  // namespace topo
