#include "topo/features.hpp"

#include <cstdio>
#include <stdexcept>

#include "topo/curves.hpp"
#include "topo/stats.hpp"

namespace topo {
namespace {

std::string tag(int t) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "t%03d", t);
  return buf;
}

void append_ps_names(std::vector<std::string>& out, const std::string& prefix,
                     const char* channels[3]) {
  for (int c = 0; c < 3; ++c) {
    for (int dim = 0; dim < 2; ++dim) {
      for (std::string_view stat : ps_entry_names()) {
        out.push_back(prefix + "_" + channels[c] + "_dim" +
                      std::to_string(dim) + "_" + std::string(stat));
      }
    }
  }
}

void append_curve_names(std::vector<std::string>& out,
                        const std::string& stem) {
  for (int t = 0; t < kCurveSamples; ++t) {
    out.push_back(stem + "_" + tag(t));
  }
}

}  // namespace

FeatureSet parse_feature_set(const std::string& name) {
  if (name == "ps-rgb") return FeatureSet::ps_rgb;
  if (name == "ps-xyz") return FeatureSet::ps_xyz;
  if (name == "pc-rgb") return FeatureSet::pc_rgb;
  if (name == "pc-xyz") return FeatureSet::pc_xyz;
  if (name == "all") return FeatureSet::all;
  throw std::invalid_argument("unknown feature set '" + name + "'");
}

std::string feature_set_name(FeatureSet set) {
  switch (set) {
    case FeatureSet::ps_rgb: return "ps-rgb";
    case FeatureSet::ps_xyz: return "ps-xyz";
    case FeatureSet::pc_rgb: return "pc-rgb";
    case FeatureSet::pc_xyz: return "pc-xyz";
    case FeatureSet::all: return "all";
  }
  throw std::logic_error("bad feature set");
}

std::size_t feature_dim(FeatureSet set) {
  switch (set) {
    case FeatureSet::ps_rgb:
    case FeatureSet::ps_xyz:
      return std::size_t(kPsLength) * 3 * 2;  // 114
    case FeatureSet::pc_rgb:
      return std::size_t(kCurveSamples) * 3 * 2;  // 1530
    case FeatureSet::pc_xyz:
      return std::size_t(kCurveSamples) * 2 * 2;  // 1020
    case FeatureSet::all:
      return feature_dim(FeatureSet::ps_rgb) + feature_dim(FeatureSet::ps_xyz) +
             feature_dim(FeatureSet::pc_rgb) + feature_dim(FeatureSet::pc_xyz);
  }
  throw std::logic_error("bad feature set");
}

std::vector<std::string> feature_names(FeatureSet set) {
  static const char* rgb[3] = {"R", "G", "B"};
  static const char* xyz[3] = {"X", "Y", "Z"};
  std::vector<std::string> out;
  out.reserve(feature_dim(set));
  switch (set) {
    case FeatureSet::ps_rgb:
      append_ps_names(out, "ps_rgb", rgb);
      break;
    case FeatureSet::ps_xyz:
      append_ps_names(out, "ps_xyz", xyz);
      break;
    case FeatureSet::pc_rgb:
      for (const char* c : rgb) {
        append_curve_names(out, std::string("pc_rgb_") + c + "_beta0");
        append_curve_names(out, std::string("pc_rgb_") + c + "_beta1");
      }
      break;
    case FeatureSet::pc_xyz:
      for (const char* curve : {"beta0", "beta1", "entropy0", "entropy1"}) {
        append_curve_names(out, std::string("pc_xyz_X_") + curve);
      }
      break;
    case FeatureSet::all:
      for (FeatureSet s : {FeatureSet::ps_rgb, FeatureSet::ps_xyz,
                           FeatureSet::pc_rgb, FeatureSet::pc_xyz}) {
        auto names = feature_names(s);
        out.insert(out.end(), names.begin(), names.end());
      }
      break;
  }
  return out;
}

std::vector<double> compute_features(const RgbImage& img, FeatureSet set) {
  switch (set) {
    case FeatureSet::ps_rgb: return ps_rgb(img);
    case FeatureSet::ps_xyz: return ps_xyz(img);
    case FeatureSet::pc_rgb: return pc_rgb(img);
    case FeatureSet::pc_xyz: return pc_xyz(img);
    case FeatureSet::all: {
      std::vector<double> out;
      out.reserve(feature_dim(FeatureSet::all));
      for (FeatureSet s : {FeatureSet::ps_rgb, FeatureSet::ps_xyz,
                           FeatureSet::pc_rgb, FeatureSet::pc_xyz}) {
        auto part = compute_features(img, s);
        out.insert(out.end(), part.begin(), part.end());
      }
      return out;
    }
  }
  throw std::logic_error("bad feature set");
}

}  // namespace topo
