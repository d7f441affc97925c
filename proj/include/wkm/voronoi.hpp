#pragma once

#include <cstdint>
#include <vector>

#include "wkm/types.hpp"

namespace wkm {

/// Axis-aligned sampling window. Pixel (i, j) samples the cell center
/// (xmin + (i+0.5)*dx, ymin + (j+0.5)*dy); j grows with y.
struct GridSpec {
  double xmin = 0.0, ymin = 0.0, xmax = 1.0, ymax = 1.0;
  size_t width = 0, height = 0;
};

/// Nearest-flat label per grid cell, row-major with index j*width + i.
struct LabelGrid {
  size_t width = 0, height = 0;
  std::vector<uint32_t> labels;

  uint32_t at(size_t i, size_t j) const { return labels[j * width + i]; }
};

/// 0/1 mask with the same layout as LabelGrid.
struct BinaryGrid {
  size_t width = 0, height = 0;
  std::vector<uint8_t> mask;

  uint8_t at(size_t i, size_t j) const { return mask[j * width + i]; }
};

/// 2D slice through a higher-dimensional space: the grid point (u, v) maps to
/// origin + u*axis_u + v*axis_v. The axes must be orthonormal.
struct SlicePlane {
  Vec origin;
  Vec axis_u;
  Vec axis_v;
};

/// Labels every cell center with the index of the nearest flat under the
/// weighted nested-subspace distance; ties go to the lowest flat index.
/// Requires at least two flats of ambient dimension 2 sharing one flat
/// dimension. Rows may be rasterized in parallel; the output is independent
/// of the worker count.
LabelGrid rasterize(const std::vector<Flat>& flats, const WeightVector& w, const GridSpec& grid,
                    unsigned threads = 1);

/// Same as rasterize but evaluates distances at slice(u, v) for flats living
/// in the slice's ambient dimension.
LabelGrid rasterize_slice(const std::vector<Flat>& flats, const WeightVector& w,
                          const GridSpec& grid, const SlicePlane& slice, unsigned threads = 1);

/// Marks every cell whose label differs from at least one 4-neighbor.
BinaryGrid extract_boundary(const LabelGrid& labels);

}  // namespace wkm
