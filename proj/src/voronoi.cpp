#include "wkm/voronoi.hpp"

#include <cmath>
#include <string>

#include "wkm/distance.hpp"
#include "wkm/parallel.hpp"

namespace wkm {

namespace {

void validate_grid(const GridSpec& grid) {
  if (!std::isfinite(grid.xmin) || !std::isfinite(grid.xmax) || !std::isfinite(grid.ymin) ||
      !std::isfinite(grid.ymax)) {
    fail(errc::invalid_config, "grid bounds must be finite");
  }
  if (!(grid.xmax > grid.xmin) || !(grid.ymax > grid.ymin)) {
    fail(errc::invalid_config, "grid bounds must satisfy xmax > xmin and ymax > ymin");
  }
  if (grid.width == 0 || grid.height == 0) {
    fail(errc::invalid_config, "grid resolution must be positive");
  }
}

void validate_flats(const std::vector<Flat>& flats, const WeightVector& w, size_t ambient) {
  if (flats.size() < 2) fail(errc::too_few_flats, "need at least two flats");
  const size_t n = flats[0].flat_dim();
  for (size_t p = 0; p < flats.size(); ++p) {
    if (flats[p].ambient_dim() != ambient) {
      fail(errc::dimension_mismatch, "flat " + std::to_string(p) + " has ambient dimension " +
                                         std::to_string(flats[p].ambient_dim()) + ", expected " +
                                         std::to_string(ambient));
    }
    if (flats[p].flat_dim() != n) {
      fail(errc::dimension_mismatch, "flats must share one flat dimension");
    }
  }
  if (w.arity() != n + 1) {
    fail(errc::dimension_mismatch, "weight arity does not match the flat dimension");
  }
}

uint32_t nearest_flat(const Vec& x, const std::vector<Flat>& flats, const WeightVector& w) {
  uint32_t best = 0;
  double best_d = dist_sq(x, flats[0], w);
  for (uint32_t p = 1; p < flats.size(); ++p) {
    const double d = dist_sq(x, flats[p], w);
    if (d < best_d) {
      best_d = d;
      best = p;
    }
  }
  return best;
}

}  // namespace

LabelGrid rasterize(const std::vector<Flat>& flats, const WeightVector& w, const GridSpec& grid,
                    unsigned threads) {
  validate_grid(grid);
  validate_flats(flats, w, 2);

  LabelGrid out;
  out.width = grid.width;
  out.height = grid.height;
  out.labels.assign(grid.width * grid.height, 0);
  const double dx = (grid.xmax - grid.xmin) / static_cast<double>(grid.width);
  const double dy = (grid.ymax - grid.ymin) / static_cast<double>(grid.height);

  detail::parallel_chunks(grid.height, threads, [&](size_t begin, size_t end) {
    Vec x(2);
    for (size_t j = begin; j < end; ++j) {
      x[1] = grid.ymin + (static_cast<double>(j) + 0.5) * dy;
      for (size_t i = 0; i < grid.width; ++i) {
        x[0] = grid.xmin + (static_cast<double>(i) + 0.5) * dx;
        out.labels[j * grid.width + i] = nearest_flat(x, flats, w);
      }
    }
  });
  return out;
}

LabelGrid rasterize_slice(const std::vector<Flat>& flats, const WeightVector& w,
                          const GridSpec& grid, const SlicePlane& slice, unsigned threads) {
  validate_grid(grid);
  const size_t ambient = slice.origin.size();
  if (slice.axis_u.size() != ambient || slice.axis_v.size() != ambient) {
    fail(errc::dimension_mismatch, "slice origin and axes must share one dimension");
  }
  double uu = 0.0, vv = 0.0, uv = 0.0;
  for (size_t c = 0; c < ambient; ++c) {
    uu += slice.axis_u[c] * slice.axis_u[c];
    vv += slice.axis_v[c] * slice.axis_v[c];
    uv += slice.axis_u[c] * slice.axis_v[c];
  }
  if (std::fabs(uu - 1.0) > kOrthoTol || std::fabs(vv - 1.0) > kOrthoTol ||
      std::fabs(uv) > kOrthoTol) {
    fail(errc::not_orthonormal, "slice axes must be orthonormal");
  }
  validate_flats(flats, w, ambient);

  LabelGrid out;
  out.width = grid.width;
  out.height = grid.height;
  out.labels.assign(grid.width * grid.height, 0);
  const double dx = (grid.xmax - grid.xmin) / static_cast<double>(grid.width);
  const double dy = (grid.ymax - grid.ymin) / static_cast<double>(grid.height);

  detail::parallel_chunks(grid.height, threads, [&](size_t begin, size_t end) {
    Vec x(ambient);
    for (size_t j = begin; j < end; ++j) {
      const double v = grid.ymin + (static_cast<double>(j) + 0.5) * dy;
      for (size_t i = 0; i < grid.width; ++i) {
        const double u = grid.xmin + (static_cast<double>(i) + 0.5) * dx;
        for (size_t c = 0; c < ambient; ++c) {
          x[c] = slice.origin[c] + u * slice.axis_u[c] + v * slice.axis_v[c];
        }
        out.labels[j * grid.width + i] = nearest_flat(x, flats, w);
      }
    }
  });
  return out;
}

BinaryGrid extract_boundary(const LabelGrid& labels) {
  BinaryGrid out;
  out.width = labels.width;
  out.height = labels.height;
  out.mask.assign(labels.width * labels.height, 0);
  for (size_t j = 0; j < labels.height; ++j) {
    for (size_t i = 0; i < labels.width; ++i) {
      const uint32_t here = labels.at(i, j);
      const bool differs = (i > 0 && labels.at(i - 1, j) != here) ||
                           (i + 1 < labels.width && labels.at(i + 1, j) != here) ||
                           (j > 0 && labels.at(i, j - 1) != here) ||
                           (j + 1 < labels.height && labels.at(i, j + 1) != here);
      if (differs) out.mask[j * labels.width + i] = 1;
    }
  }
  return out;
}

}  // namespace wkm
