#pragma once

#include <span>
#include <vector>

#include "wkm/types.hpp"

namespace wkm {

/// Dense square matrix, row-major.
struct Matrix {
  size_t n = 0;
  std::vector<double> a;

  Matrix() = default;
  explicit Matrix(size_t size) : n(size), a(size * size, 0.0) {}

  double& operator()(size_t i, size_t j) { return a[i * n + j]; }
  double operator()(size_t i, size_t j) const { return a[i * n + j]; }

  double frobenius() const;
};

/// Eigenvalues sorted descending with aligned orthonormal eigenvectors.
struct EigenDecomposition {
  std::vector<double> values;
  std::vector<Vec> vectors;
};

/// Arithmetic mean of a nonempty point range.
Vec mean(std::span<const Vec> points);

/// Sum of outer products (s - mu)(s - mu)^T over the range. Not divided by
/// the point count; eigenvectors are scale-invariant so the raw sum is used.
Matrix scatter_matrix(std::span<const Vec> points, const Vec& mu);

/// Cyclic-by-row Jacobi eigendecomposition of a symmetric matrix. Iterates
/// until the off-diagonal Frobenius norm drops below 1e-12 * max(1, ||M||_F),
/// capped at 100 sweeps. Eigenvalues are sorted descending with a stable sort;
/// each eigenvector is sign-normalized so that its largest-magnitude component
/// (lowest index on ties) is positive. The output is a pure function of the
/// input bits.
EigenDecomposition symmetric_eigen(const Matrix& m);

/// Energy-minimizing flat of dimension n for a point set: center at the mean,
/// basis given by the top-n scatter eigenvectors. Optimal for every valid
/// weight vector. Rank-deficient sets are fine; the eigensolver's tie rules
/// complete the basis deterministically.
Flat fit_flat(std::span<const Vec> points, size_t n);

}  // namespace wkm
