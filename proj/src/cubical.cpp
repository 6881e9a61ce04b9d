#include "topo/cubical.hpp"

#include <stdexcept>

#include "topo/kernels.hpp"

namespace topo {
namespace {

constexpr int kOffsets8[8][2] = {{-1, -1}, {0, -1}, {1, -1}, {-1, 0},
                                 {1, 0},   {-1, 1}, {0, 1},  {1, 1}};
constexpr int kOffsets4[4][2] = {{0, -1}, {-1, 0}, {1, 0}, {0, 1}};

}  // namespace

BinaryImage threshold(const GrayImage& img, int t) {
  if (t < 0 || t > 255) {
    throw std::invalid_argument("threshold: t outside [0, 255]");
  }
  BinaryImage out;
  out.width = img.width;
  out.height = img.height;
  out.bits.resize(img.pixel_count());
  kernels::threshold_le(img.values.data(), float(t), out.bits.data(),
                        img.pixel_count());
  return out;
}

ComponentLabeling label_components(const BinaryImage& img, Connectivity conn,
                                   TargetColor target) {
  const int w = img.width;
  const int h = img.height;
  const std::uint8_t want = target == TargetColor::white ? 1 : 0;

  ComponentLabeling out;
  out.width = w;
  out.height = h;
  out.labels.assign(img.pixel_count(), 0);

  const auto* offsets = conn == Connectivity::eight ? &kOffsets8[0] : &kOffsets4[0];
  const int noff = conn == Connectivity::eight ? 8 : 4;

  std::vector<std::int32_t> stack;
  std::int32_t next = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t idx = std::size_t(y) * w + x;
      if ((img.bits[idx] != 0) != (want != 0) || out.labels[idx] != 0) continue;
      ++next;
      out.labels[idx] = next;
      stack.push_back(std::int32_t(idx));
      while (!stack.empty()) {
        const std::int32_t cur = stack.back();
        stack.pop_back();
        const int cx = cur % w;
        const int cy = cur / w;
        for (int k = 0; k < noff; ++k) {
          const int nx = cx + offsets[k][0];
          const int ny = cy + offsets[k][1];
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          const std::size_t nidx = std::size_t(ny) * w + nx;
          if ((img.bits[nidx] != 0) == (want != 0) && out.labels[nidx] == 0) {
            out.labels[nidx] = next;
            stack.push_back(std::int32_t(nidx));
          }
        }
      }
    }
  }
  out.count = int(next);
  return out;
}

BettiNumbers betti(const BinaryImage& img) {
  BettiNumbers result;
  result.b0 =
      label_components(img, Connectivity::eight, TargetColor::white).count;

  const ComponentLabeling black =
      label_components(img, Connectivity::four, TargetColor::black);
  std::vector<std::uint8_t> touches_border(std::size_t(black.count) + 1, 0);
  const int w = img.width;
  const int h = img.height;
  for (int x = 0; x < w; ++x) {
    if (auto l = black.at(x, 0)) touches_border[std::size_t(l)] = 1;
    if (auto l = black.at(x, h - 1)) touches_border[std::size_t(l)] = 1;
  }
  for (int y = 0; y < h; ++y) {
    if (auto l = black.at(0, y)) touches_border[std::size_t(l)] = 1;
    if (auto l = black.at(w - 1, y)) touches_border[std::size_t(l)] = 1;
  }
  int holes = 0;
  for (int l = 1; l <= black.count; ++l) {
    if (!touches_border[std::size_t(l)]) ++holes;
  }
  result.b1 = holes;
  return result;
}

long long euler_characteristic(const BinaryImage& img) {
  const int w = img.width;
  const int h = img.height;
  const auto white = [&](int x, int y) {
    return x >= 0 && y >= 0 && x < w && y < h && img.at(x, y);
  };

  long long faces = 0, edges = 0, verts = 0;
  // Faces: one per white pixel.  Edges and vertices are shared between
  // neighbors, so count them on the (w+1) x (h+1) grid of cell boundaries.
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (img.at(x, y)) ++faces;
    }
  }
  // Vertical edges at (x, y)-(x, y+1): present iff pixel (x-1, y) or (x, y)
  // is white.  Horizontal edges analogous.
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x <= w; ++x) {
      if (white(x - 1, y) || white(x, y)) ++edges;
    }
  }
  for (int y = 0; y <= h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (white(x, y - 1) || white(x, y)) ++edges;
    }
  }
  // Vertices: present iff any of the four incident pixels is white.
  for (int y = 0; y <= h; ++y) {
    for (int x = 0; x <= w; ++x) {
      if (white(x - 1, y - 1) || white(x, y - 1) || white(x - 1, y) ||
          white(x, y)) {
        ++verts;
      }
    }
  }
  return verts - edges + faces;
}

}  // namespace topo
