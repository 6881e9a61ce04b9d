#pragma once
// Shared helpers for the unit and acceptance suites.

#include <cmath>
#include <initializer_list>
#include <string>
#include <vector>

#include "topo/cubical.hpp"
#include "topo/image.hpp"
#include "topo/image_codec.hpp"

namespace testutil {

inline topo::GrayImage gray_image(int width, int height,
                                  std::initializer_list<float> values) {
  topo::GrayImage img;
  img.width = width;
  img.height = height;
  img.values.assign(values);
  return img;
}

inline topo::GrayImage constant_gray(int width, int height, float value) {
  topo::GrayImage img;
  img.width = width;
  img.height = height;
  img.values.assign(std::size_t(width) * height, value);
  return img;
}

inline topo::RgbImage constant_rgb(int width, int height, std::uint8_t r,
                                   std::uint8_t g, std::uint8_t b) {
  topo::RgbImage img;
  img.width = width;
  img.height = height;
  img.r.assign(std::size_t(width) * height, r);
  img.g.assign(std::size_t(width) * height, g);
  img.b.assign(std::size_t(width) * height, b);
  return img;
}

/// Interprets a CSV grid as a binary image (nonzero = white).
inline topo::BinaryImage binary_from_csv(const std::string& path) {
  const topo::GrayImage gray = topo::load_csv_grid(path);
  topo::BinaryImage out;
  out.width = gray.width;
  out.height = gray.height;
  out.bits.resize(gray.pixel_count());
  for (std::size_t i = 0; i < out.bits.size(); ++i) {
    out.bits[i] = gray.values[i] != 0.0f ? 1 : 0;
  }
  return out;
}

/// White one-pixel frame around an image (the Fig.-3 caption variant).
inline topo::BinaryImage add_white_frame(const topo::BinaryImage& img) {
  topo::BinaryImage out;
  out.width = img.width + 2;
  out.height = img.height + 2;
  out.bits.assign(out.pixel_count(), 1);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      out.set(x + 1, y + 1, img.at(x, y));
    }
  }
  return out;
}

inline std::string data_path(const std::string& name) {
  return std::string(TEST_DATA_DIR) + "/" + name;
}

inline bool close(double a, double b, double tol = 1e-9) {
  return std::abs(a - b) <= tol;
}

inline bool close_rel(double a, double b, double tol) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= tol * scale;
}

}  // namespace testutil
