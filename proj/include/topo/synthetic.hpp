#pragma once
/**
 * @file synthetic.hpp
 * @brief Seeded generators for self-tests, demos, and benchmarks: random
 *        gray images, lesion-like scenes with ground truth, Gaussian blob
 *        features, and fusion datasets with a class-informative half.
 *
 * All generators are deterministic functions of their seed on every
 * platform.
 */

#include <cstdint>

#include "topo/fusion.hpp"
#include "topo/image.hpp"
#include "topo/svm.hpp"

namespace topo {

/// Uniform random image over `levels` evenly spaced gray values in [0,255].
GrayImage random_gray_image(int width, int height, int levels,
                            std::uint64_t seed);

/// Piecewise-constant image: a background level plus a few random
/// rectangles.  Its persistence diagrams stay small, which keeps the
/// brute-force bottleneck matching applicable.
GrayImage random_step_image(int width, int height, int rects, int levels,
                            std::uint64_t seed);

/// Clean disk fixture: dark disk on a uniform bright background.
struct LesionScene {
  RgbImage image;
  Mask truth;
};
LesionScene clean_disk_scene(int size, int radius, int lesion_value,
                             int background_value);

/// Dark ellipse with noisy background and a few dark speckles.
LesionScene noisy_ellipse_scene(int size, std::uint64_t seed);

/// Isotropic Gaussian blobs, one cluster per class, `per_class` samples
/// each, labels 0..classes-1 in block order.
struct BlobData {
  FeatureMatrix features;
  std::vector<int> labels;
};
BlobData gaussian_blobs(int classes, int per_class, int dim, double spread,
                        std::uint64_t seed);

/// Two-class fusion dataset.  The informative half gets class-dependent
/// means; the other half is pure noise.
FusionDataset fusion_dataset(int per_class, int backbone_dim, int topo_dim,
                             bool topo_informative, std::uint64_t seed);

}  // namespace topo
