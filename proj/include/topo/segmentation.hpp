#pragma once
/**
 * @file segmentation.hpp
 * @brief Training-free lesion segmentation by pixel life intervals.
 *
 * Pipeline: average the channels, measure how long each pixel stays below
 * the shrinking mean-relative threshold (its life-span), pick a filtration
 * step from the component-count trace, score the surviving components by
 * center-weighted accumulated life, and return the filled convex hull of
 * the selected components.
 */

#include <span>
#include <utility>
#include <vector>

#include "topo/cubical.hpp"
#include "topo/image.hpp"

namespace topo {

struct SegmentationConfig {
  int total_steps = 50;        // T
  int divisor = 4;             // in T' = 1 + floor(T''/divisor)
  double tiny_fraction = 0.001;  // minimum component area / image area
};

/// Per-pixel life-span L in [0, T]; L(x,y) = largest step t with
/// gray(x,y) <= a*(1 - t/T), 0 when the pixel is never below threshold.
struct LifeMap {
  int width = 0;
  int height = 0;
  std::vector<int> spans;

  int at(int x, int y) const { return spans[std::size_t(y) * width + x]; }
};

LifeMap life_spans(const GrayImage& gray, const SegmentationConfig& cfg);

/// Binary image of pixels with life-span >= t (the filtration set S_t).
BinaryImage life_threshold(const LifeMap& life, int t);

/// T' from the component-count trace; counts[i] is the count for S_{i+1}.
/// T'' is the first step whose successor has more components (T-1 when the
/// trace never increases); T' = 1 + floor(T''/divisor), capped at T-1.
int select_threshold(std::span<const int> counts,
                     const SegmentationConfig& cfg);

/// Life score of a component: (1 + d(C,border))^3 * sum of life-spans
/// / (1 + d(C,center))^3, with pixel-to-center and pixel-to-border
/// distances Euclidean and minimized over the component.
double life_score(std::span<const std::pair<int, int>> pixels,
                  const LifeMap& life);

struct ComponentScore {
  int label = 0;
  int area = 0;
  double score = 0.0;
  bool kept = false;
};

struct SegmentationResult {
  Mask mask;
  int t_second = 0;                 // T''
  int t_prime = 0;                  // T'
  std::vector<int> component_counts;  // count(S_t) for t = 1..T
  std::vector<ComponentScore> scores;
  bool degenerate = false;  // constant image: mask forced to all-true
};

SegmentationResult segment(const RgbImage& img, const SegmentationConfig& cfg);

/// Intersection over union; two empty masks count as identical (1).
/// Throws std::invalid_argument on dimension mismatch.
double iou(const Mask& a, const Mask& b);

/// Filled convex hull of a point set on the pixel grid: a pixel is set iff
/// its center lies inside or on the hull.  Exposed for tests.
Mask convex_hull_mask(std::span<const std::pair<int, int>> points, int width,
                      int height);

}  // namespace topo
