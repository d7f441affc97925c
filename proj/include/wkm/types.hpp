#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "wkm/errors.hpp"

namespace wkm {

/// A point in R^N.
using Vec = std::vector<double>;

// Validation tolerances shared across the library.
inline constexpr double kWeightSumTol = 1e-9;
inline constexpr double kOrthoTol = 1e-8;

/// Weight vector over nested subspace dimensions 0..n: each entry in [0,1],
/// entries summing to 1 (within kWeightSumTol).
class WeightVector {
public:
  /// Defaults to the single-entry vector (1), the point-distance weighting.
  WeightVector() : w_{1.0} {}

  size_t arity() const { return w_.size(); }
  double operator[](size_t j) const { return w_[j]; }
  const std::vector<double>& values() const { return w_; }

  friend WeightVector validate_weights(std::vector<double> raw, bool normalize);

private:
  explicit WeightVector(std::vector<double> w) : w_(std::move(w)) {}
  std::vector<double> w_;
};

/// Validates a raw weight list. With normalize=true, nonnegative entries with
/// a positive sum are rescaled to sum to 1; otherwise the sum must already be
/// 1 within kWeightSumTol.
WeightVector validate_weights(std::vector<double> raw, bool normalize = false);

/// An affine flat in R^N: a center point plus an orthonormal basis of its
/// direction space. flat_dim() == 0 means a plain point.
class Flat {
public:
  Flat(Vec center, std::vector<Vec> basis);

  size_t ambient_dim() const { return center_.size(); }
  size_t flat_dim() const { return basis_.size(); }
  const Vec& center() const { return center_; }
  const std::vector<Vec>& basis() const { return basis_; }

  bool operator==(const Flat& other) const = default;

private:
  Vec center_;
  std::vector<Vec> basis_;
};

/// A finite ordered list of points sharing one ambient dimension.
class Dataset {
public:
  explicit Dataset(std::vector<Vec> points);

  size_t size() const { return points_.size(); }
  size_t dim() const { return dim_; }
  const Vec& operator[](size_t i) const { return points_[i]; }
  const std::vector<Vec>& points() const { return points_; }

private:
  std::vector<Vec> points_;
  size_t dim_;
};

/// Result of a clustering run: per-point cluster ids, one fitted flat per
/// cluster, the total energy, and loop bookkeeping.
struct Clustering {
  std::vector<uint32_t> assignments;
  std::vector<Flat> flats;
  double energy = 0.0;
  uint32_t iterations_run = 0;
  bool converged = false;

  size_t k() const { return flats.size(); }
};

}  // namespace wkm
