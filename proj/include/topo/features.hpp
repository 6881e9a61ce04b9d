#pragma once
/**
 * @file features.hpp
 * @brief Named feature-set assembly for the CLI and classifiers.
 */

#include <cstddef>
#include <string>
#include <vector>

#include "topo/image.hpp"

namespace topo {

enum class FeatureSet { ps_rgb, ps_xyz, pc_rgb, pc_xyz, all };

/// Parses "ps-rgb", "ps-xyz", "pc-rgb", "pc-xyz", "all".
/// Throws std::invalid_argument on anything else.
FeatureSet parse_feature_set(const std::string& name);
std::string feature_set_name(FeatureSet set);

/// 114 / 114 / 1530 / 1020 / 2778.
std::size_t feature_dim(FeatureSet set);

/// Column names matching compute_features, e.g. "ps_rgb_R_dim0_mid_mean"
/// or "pc_xyz_X_beta1_t042".  `all` concatenates in the fixed order
/// ps-rgb, ps-xyz, pc-rgb, pc-xyz.
std::vector<std::string> feature_names(FeatureSet set);

std::vector<double> compute_features(const RgbImage& img, FeatureSet set);

}  // namespace topo
