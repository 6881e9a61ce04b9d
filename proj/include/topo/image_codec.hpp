#pragma once
/**
 * @file image_codec.hpp
 * @brief Raster file I/O: PNG (8-bit RGB/gray), binary PGM/PPM, and the
 *        plain-text CSV grid format used for test fixtures.
 *
 * Failures throw topo::IoError with a distinct kind for missing files,
 * unsupported formats, and corrupt data.
 */

#include <string>

#include "topo/errors.hpp"
#include "topo/image.hpp"

namespace topo {

/// Decode an image file.  Format is detected from content (PNG signature,
/// PGM/PPM magic) with a CSV fallback by extension.  Grayscale sources are
/// replicated into all three channels.
RgbImage load_image(const std::string& path);

/// Parse a CSV grid of integers in [0, 255] into a grayscale image.
GrayImage load_csv_grid(const std::string& path);

/// Write a binary mask as PGM (P5) with values {0, 255}.
void save_mask_pgm(const std::string& path, const Mask& mask);

/// Read a {0,255}-valued PGM back into a mask (nonzero = lesion).
Mask load_mask_pgm(const std::string& path);

/// Write an RGB image as binary PPM (P6).
void save_ppm(const std::string& path, const RgbImage& img);

/// Write a grayscale image as binary PGM (P5), rounding to nearest integer.
void save_gray_pgm(const std::string& path, const GrayImage& img);

}  // namespace topo
