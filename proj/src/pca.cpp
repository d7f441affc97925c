#include "wkm/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace wkm {

namespace {
constexpr double kOffDiagTol = 1e-12;
constexpr double kSymmetryTol = 1e-12;
constexpr int kMaxSweeps = 100;
}  // namespace

double Matrix::frobenius() const {
  double s = 0.0;
  for (double x : a) s += x * x;
  return std::sqrt(s);
}

Vec mean(std::span<const Vec> points) {
  if (points.empty()) fail(errc::empty_set, "mean of an empty point set");
  const size_t dim = points[0].size();
  Vec mu(dim, 0.0);
  for (const Vec& p : points) {
    if (p.size() != dim) fail(errc::dimension_mismatch, "mixed point dimensions in mean");
    for (size_t c = 0; c < dim; ++c) mu[c] += p[c];
  }
  const double m = static_cast<double>(points.size());
  for (size_t c = 0; c < dim; ++c) mu[c] /= m;
  return mu;
}

Matrix scatter_matrix(std::span<const Vec> points, const Vec& mu) {
  if (points.empty()) fail(errc::empty_set, "scatter matrix of an empty point set");
  const size_t dim = mu.size();
  Matrix m(dim);
  Vec d(dim);
  for (const Vec& p : points) {
    if (p.size() != dim) {
      fail(errc::dimension_mismatch, "point dimension does not match the mean");
    }
    for (size_t c = 0; c < dim; ++c) d[c] = p[c] - mu[c];
    for (size_t i = 0; i < dim; ++i) {
      const double di = d[i];
      double* row = &m.a[i * dim];
      for (size_t j = i; j < dim; ++j) row[j] += di * d[j];
    }
  }
  // Mirror the upper triangle; the matrix is exactly symmetric by build.
  for (size_t i = 0; i < dim; ++i) {
    for (size_t j = i + 1; j < dim; ++j) m(j, i) = m(i, j);
  }
  return m;
}

namespace {

double off_diagonal_norm(const Matrix& m) {
  double s = 0.0;
  for (size_t p = 0; p + 1 < m.n; ++p) {
    for (size_t q = p + 1; q < m.n; ++q) s += m(p, q) * m(p, q);
  }
  return std::sqrt(2.0 * s);
}

}  // namespace

EigenDecomposition symmetric_eigen(const Matrix& m) {
  const size_t n = m.n;
  if (n == 0) fail(errc::empty_set, "eigendecomposition of an empty matrix");
  const double norm = m.frobenius();
  const double sym_tol = kSymmetryTol * std::max(1.0, norm);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      if (std::fabs(m(i, j) - m(j, i)) > sym_tol) {
        fail(errc::not_symmetric, "entries (" + std::to_string(i) + "," + std::to_string(j) +
                                      ") differ by " + std::to_string(m(i, j) - m(j, i)));
      }
    }
  }

  Matrix a = m;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (a(i, j) + a(j, i));
      a(i, j) = avg;
      a(j, i) = avg;
    }
  }

  Matrix v(n);
  for (size_t i = 0; i < n; ++i) v(i, i) = 1.0;

  const double off_tol = kOffDiagTol * std::max(1.0, norm);
  // Rotations below this leave the off-norm under off_tol even if every pair
  // is skipped (off <= n * skip_tol).
  const double skip_tol = off_tol / static_cast<double>(n);

  bool converged = off_diagonal_norm(a) <= off_tol;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    for (size_t p = 0; p + 1 < n; ++p) {
      for (size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::fabs(apq) <= skip_tol) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        const double app = a(p, p);
        const double aqq = a(q, q);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (size_t i = 0; i < n; ++i) {
          if (i == p || i == q) continue;
          const double aip = a(i, p);
          const double aiq = a(i, q);
          a(i, p) = c * aip - s * aiq;
          a(p, i) = a(i, p);
          a(i, q) = s * aip + c * aiq;
          a(q, i) = a(i, q);
        }
        for (size_t i = 0; i < n; ++i) {
          const double vip = v(i, p);
          const double viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
      }
    }
    converged = off_diagonal_norm(a) <= off_tol;
  }
  if (!converged) {
    fail(errc::no_convergence,
         "Jacobi iteration did not converge in " + std::to_string(kMaxSweeps) + " sweeps");
  }

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t i, size_t j) { return a(i, i) > a(j, j); });

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.assign(n, Vec(n));
  for (size_t r = 0; r < n; ++r) {
    const size_t col = order[r];
    out.values[r] = a(col, col);
    Vec& vec = out.vectors[r];
    for (size_t i = 0; i < n; ++i) vec[i] = v(i, col);
    size_t lead = 0;
    double lead_abs = std::fabs(vec[0]);
    for (size_t i = 1; i < n; ++i) {
      const double ai = std::fabs(vec[i]);
      if (ai > lead_abs) {
        lead_abs = ai;
        lead = i;
      }
    }
    if (vec[lead] < 0.0) {
      for (double& x : vec) x = -x;
    }
  }
  return out;
}

Flat fit_flat(std::span<const Vec> points, size_t n) {
  if (points.empty()) fail(errc::empty_set, "cannot fit a flat to an empty point set");
  const size_t dim = points[0].size();
  if (n >= dim) {
    fail(errc::dimension_too_large, "flat dimension " + std::to_string(n) +
                                        " must be below ambient dimension " + std::to_string(dim));
  }
  Vec mu = mean(points);
  if (n == 0) return Flat(std::move(mu), {});
  const EigenDecomposition eig = symmetric_eigen(scatter_matrix(points, mu));
  std::vector<Vec> basis(eig.vectors.begin(), eig.vectors.begin() + static_cast<long>(n));
  return Flat(std::move(mu), std::move(basis));
}

}  // namespace wkm
