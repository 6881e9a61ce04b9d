#include "topo/image.hpp"

#include <stdexcept>

#include "topo/kernels.hpp"

namespace topo {

GrayImage rgb_to_gray(const RgbImage& img) {
  GrayImage out;
  out.width = img.width;
  out.height = img.height;
  out.values.resize(img.pixel_count());
  kernels::gray_from_rgb(img.r.data(), img.g.data(), img.b.data(),
                         out.values.data(), img.pixel_count());
  return out;
}

std::tuple<GrayImage, GrayImage, GrayImage> rgb_to_xyz(const RgbImage& img) {
  GrayImage x, y, z;
  for (GrayImage* ch : {&x, &y, &z}) {
    ch->width = img.width;
    ch->height = img.height;
    ch->values.resize(img.pixel_count());
  }
  kernels::xyz_from_rgb(img.r.data(), img.g.data(), img.b.data(),
                        x.values.data(), y.values.data(), z.values.data(),
                        img.pixel_count());
  return {std::move(x), std::move(y), std::move(z)};
}

RgbImage apply_mask(const RgbImage& img, const Mask& mask) {
  if (img.width != mask.width || img.height != mask.height) {
    throw std::invalid_argument("apply_mask: image and mask dimensions differ");
  }
  RgbImage out = img;
  const std::size_t n = img.pixel_count();
  for (std::size_t i = 0; i < n; ++i) {
    if (mask.bits[i] == 0) {
      out.r[i] = 255;
      out.g[i] = 255;
      out.b[i] = 255;
    }
  }
  return out;
}

GrayImage extract_channel(const RgbImage& img, Channel c) {
  const std::vector<std::uint8_t>* src = nullptr;
  switch (c) {
    case Channel::r: src = &img.r; break;
    case Channel::g: src = &img.g; break;
    case Channel::b: src = &img.b; break;
  }
  GrayImage out;
  out.width = img.width;
  out.height = img.height;
  out.values.resize(img.pixel_count());
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] = float((*src)[i]);
  }
  return out;
}

}  // namespace topo
