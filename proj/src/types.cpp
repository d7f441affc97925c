#include "wkm/types.hpp"

#include <cmath>
#include <string>

namespace wkm {

namespace {

bool all_finite(const Vec& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace

WeightVector validate_weights(std::vector<double> raw, bool normalize) {
  if (raw.empty()) fail(errc::all_zero, "weight vector is empty");
  double sum = 0.0;
  for (size_t j = 0; j < raw.size(); ++j) {
    if (!std::isfinite(raw[j])) {
      fail(errc::parse_error, "weight " + std::to_string(j) + " is not finite");
    }
    if (raw[j] < 0.0) {
      fail(errc::negative_weight,
           "weight " + std::to_string(j) + " = " + std::to_string(raw[j]));
    }
    sum += raw[j];
  }
  if (sum == 0.0) fail(errc::all_zero, "all weights are zero");
  if (normalize) {
    for (double& w : raw) w /= sum;
  } else if (std::fabs(sum - 1.0) > kWeightSumTol) {
    fail(errc::sum_not_one, "weights sum to " + std::to_string(sum));
  }
  return WeightVector(std::move(raw));
}

Flat::Flat(Vec center, std::vector<Vec> basis)
    : center_(std::move(center)), basis_(std::move(basis)) {
  const size_t ambient = center_.size();
  if (ambient == 0) fail(errc::dimension_mismatch, "flat center is empty");
  if (basis_.size() >= ambient) {
    fail(errc::dimension_too_large,
         "flat dimension " + std::to_string(basis_.size()) +
             " must be below ambient dimension " + std::to_string(ambient));
  }
  if (!all_finite(center_)) fail(errc::parse_error, "flat center has non-finite entries");
  for (size_t i = 0; i < basis_.size(); ++i) {
    if (basis_[i].size() != ambient) {
      fail(errc::dimension_mismatch,
           "basis vector " + std::to_string(i + 1) + " has dimension " +
               std::to_string(basis_[i].size()) + ", expected " + std::to_string(ambient));
    }
    if (!all_finite(basis_[i])) {
      fail(errc::parse_error,
           "basis vector " + std::to_string(i + 1) + " has non-finite entries");
    }
  }
  for (size_t i = 0; i < basis_.size(); ++i) {
    for (size_t j = i; j < basis_.size(); ++j) {
      double dot = 0.0;
      for (size_t c = 0; c < ambient; ++c) dot += basis_[i][c] * basis_[j][c];
      const double expect = (i == j) ? 1.0 : 0.0;
      if (std::fabs(dot - expect) > kOrthoTol) {
        fail(errc::not_orthonormal,
             "<v" + std::to_string(i + 1) + ",v" + std::to_string(j + 1) + "> = " +
                 std::to_string(dot));
      }
    }
  }
}

Dataset::Dataset(std::vector<Vec> points) : points_(std::move(points)), dim_(0) {
  if (points_.empty()) fail(errc::empty_set, "dataset must contain at least one point");
  dim_ = points_[0].size();
  if (dim_ == 0) fail(errc::dimension_mismatch, "points must have at least one coordinate");
  for (size_t i = 0; i < points_.size(); ++i) {
    if (points_[i].size() != dim_) {
      fail(errc::dimension_mismatch,
           "point " + std::to_string(i) + " has dimension " +
               std::to_string(points_[i].size()) + ", expected " + std::to_string(dim_));
    }
    if (!all_finite(points_[i])) {
      fail(errc::parse_error, "point " + std::to_string(i) + " has non-finite coordinates");
    }
  }
}

}  // namespace wkm
