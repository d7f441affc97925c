#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wkm/voronoi.hpp"

namespace wkm {

/// 8-bit RGB raster, row-major top-down, three bytes per pixel.
struct RgbImage {
  size_t width = 0, height = 0;
  std::vector<uint8_t> data;

  uint8_t at(size_t x, size_t y, size_t channel) const {
    return data[(y * width + x) * 3 + channel];
  }
};

/// 8-bit grayscale raster, row-major top-down.
struct GrayImage {
  size_t width = 0, height = 0;
  std::vector<uint8_t> data;
};

/// Binary PPM (P6, maxval 255). The reader accepts any whitespace and
/// '#' comments in the header; the writer emits "P6\n<w> <h>\n255" followed
/// by a single space and the raw pixel bytes, so write-then-read is
/// byte-exact.
RgbImage read_ppm(const std::string& path);
void write_ppm(const std::string& path, const RgbImage& img);

/// Binary PGM (P5, maxval 255), same header conventions as the PPM pair.
GrayImage read_pgm(const std::string& path);
void write_pgm(const std::string& path, const GrayImage& img);

/// Label grid rendered to gray levels: label * 255 / (count-1), rounded.
/// Grid row j = height-1 (largest y) becomes the top image row.
GrayImage labels_to_gray(const LabelGrid& labels, size_t label_count);

/// Boundary mask rendered as {0, 255}, same row orientation as labels_to_gray.
GrayImage boundary_to_gray(const BinaryGrid& boundary);

}  // namespace wkm
