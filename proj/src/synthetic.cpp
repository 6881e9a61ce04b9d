#include "topo/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "rng_util.hpp"

namespace topo {
namespace {

using detail::uniform01;

double gaussian(std::mt19937_64& rng) {
  // Box-Muller; the log argument is kept away from zero.
  const double u1 = std::max(uniform01(rng), 1e-12);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {  // inclusive
  return lo + int(rng() % std::uint64_t(hi - lo + 1));
}

std::uint8_t clamp_u8(double v) {
  return std::uint8_t(std::clamp(v, 0.0, 255.0));
}

RgbImage gray_scene_to_rgb(const std::vector<double>& values, int size) {
  RgbImage img;
  img.width = size;
  img.height = size;
  img.r.resize(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    img.r[i] = clamp_u8(std::round(values[i]));
  }
  img.g = img.r;
  img.b = img.r;
  return img;
}

}  // namespace

GrayImage random_gray_image(int width, int height, int levels,
                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  GrayImage img;
  img.width = width;
  img.height = height;
  img.values.resize(img.pixel_count());
  for (float& v : img.values) {
    const int k = uniform_int(rng, 0, levels - 1);
    v = float(std::lround(255.0 * double(k) / double(levels - 1)));
  }
  return img;
}

GrayImage random_step_image(int width, int height, int rects, int levels,
                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto level_value = [&](int k) {
    return float(std::lround(255.0 * double(k) / double(levels - 1)));
  };

  GrayImage img;
  img.width = width;
  img.height = height;
  img.values.assign(img.pixel_count(), level_value(levels - 1));
  for (int r = 0; r < rects; ++r) {
    const int x0 = uniform_int(rng, 0, width - 1);
    const int y0 = uniform_int(rng, 0, height - 1);
    const int x1 = std::min(width - 1, x0 + uniform_int(rng, 0, width / 2));
    const int y1 = std::min(height - 1, y0 + uniform_int(rng, 0, height / 2));
    const float v = level_value(uniform_int(rng, 0, levels - 1));
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        img.values[std::size_t(y) * width + x] = v;
      }
    }
  }
  return img;
}

LesionScene clean_disk_scene(int size, int radius, int lesion_value,
                             int background_value) {
  LesionScene scene;
  scene.truth.width = size;
  scene.truth.height = size;
  scene.truth.bits.assign(std::size_t(size) * size, 0);

  std::vector<double> values(std::size_t(size) * size,
                             double(background_value));
  const double c = double(size - 1) / 2.0;
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const double dx = double(x) - c;
      const double dy = double(y) - c;
      if (dx * dx + dy * dy <= double(radius) * radius) {
        values[std::size_t(y) * size + x] = double(lesion_value);
        scene.truth.set(x, y, true);
      }
    }
  }
  scene.image = gray_scene_to_rgb(values, size);
  return scene;
}

LesionScene noisy_ellipse_scene(int size, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  LesionScene scene;
  scene.truth.width = size;
  scene.truth.height = size;
  scene.truth.bits.assign(std::size_t(size) * size, 0);

  const double cx = double(size - 1) / 2.0 + uniform_int(rng, -4, 4);
  const double cy = double(size - 1) / 2.0 + uniform_int(rng, -4, 4);
  const double rx = double(uniform_int(rng, size / 6, size / 4));
  const double ry = double(uniform_int(rng, size / 6, size / 4));
  const double theta = uniform01(rng) * M_PI;
  const double ct = std::cos(theta), st = std::sin(theta);

  std::vector<double> values(std::size_t(size) * size, 0.0);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const double dx = double(x) - cx;
      const double dy = double(y) - cy;
      const double u = dx * ct + dy * st;
      const double v = -dx * st + dy * ct;
      const bool inside = (u * u) / (rx * rx) + (v * v) / (ry * ry) <= 1.0;
      double value;
      if (inside) {
        scene.truth.set(x, y, true);
        value = 40.0 + 8.0 * gaussian(rng);
      } else {
        value = 200.0 + 12.0 * gaussian(rng);
      }
      values[std::size_t(y) * size + x] = value;
    }
  }
  // Dark speckles in the background; small enough for the tiny-component
  // filter to discard.
  const int speckles = uniform_int(rng, 3, 6);
  for (int s = 0; s < speckles; ++s) {
    const int px = uniform_int(rng, 1, size - 2);
    const int py = uniform_int(rng, 1, size - 2);
    if (scene.truth.at(px, py)) continue;
    values[std::size_t(py) * size + px] = 45.0;
  }
  scene.image = gray_scene_to_rgb(values, size);
  return scene;
}

BlobData gaussian_blobs(int classes, int per_class, int dim, double spread,
                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  BlobData data;
  data.features.rows = std::size_t(classes) * per_class;
  data.features.cols = std::size_t(dim);
  data.features.data.reserve(data.features.rows * data.features.cols);
  for (int c = 0; c < classes; ++c) {
    for (int i = 0; i < per_class; ++i) {
      for (int d = 0; d < dim; ++d) {
        const double center = d % classes == c ? 5.0 : 0.0;
        data.features.data.push_back(center + spread * gaussian(rng));
      }
      data.labels.push_back(c);
    }
  }
  return data;
}

FusionDataset fusion_dataset(int per_class, int backbone_dim, int topo_dim,
                             bool topo_informative, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  FusionDataset data;
  data.samples.size = std::size_t(per_class) * 2;
  data.samples.backbone.reserve(data.samples.size * std::size_t(backbone_dim));
  data.samples.topo.reserve(data.samples.size * std::size_t(topo_dim));
  for (int c = 0; c < 2; ++c) {
    const double shift = c == 0 ? -1.0 : 1.0;
    for (int i = 0; i < per_class; ++i) {
      for (int d = 0; d < backbone_dim; ++d) {
        const double mean = topo_informative ? 0.0 : shift;
        data.samples.backbone.push_back(mean + 0.5 * gaussian(rng));
      }
      for (int d = 0; d < topo_dim; ++d) {
        const double mean = topo_informative ? shift : 0.0;
        data.samples.topo.push_back(mean + 0.5 * gaussian(rng));
      }
      data.samples.labels.push_back(c);
    }
  }
  return data;
}

}  // namespace topo
