#include "wkm/distance.hpp"

#include <cmath>
#include <string>

namespace wkm {

// Negative results can only come from rounding: cancellation in the final
// subtraction plus projection overshoot from a basis that is orthonormal only
// to kOrthoTol. Anything below that envelope means an inconsistent
// flat/weight combination and is reported instead of clamped.
static double negative_clamp_floor(double nsq, size_t n) {
  return -(1e-9 + nsq * (2.0 * kOrthoTol * static_cast<double>(n) + 1e-12));
}

double dist_sq(const Vec& x, const Flat& v, const WeightVector& w) {
  const size_t ambient = v.ambient_dim();
  const size_t n = v.flat_dim();
  if (x.size() != ambient) {
    fail(errc::dimension_mismatch,
         "point dimension " + std::to_string(x.size()) + " vs flat ambient dimension " +
             std::to_string(ambient));
  }
  if (w.arity() != n + 1) {
    fail(errc::dimension_mismatch,
         "weight arity " + std::to_string(w.arity()) + " vs flat dimension " +
             std::to_string(n) + " (need n+1 weights)");
  }

  const Vec& v0 = v.center();
  double nsq = 0.0;
  for (size_t c = 0; c < ambient; ++c) {
    const double d = x[c] - v0[c];
    nsq += d * d;
  }

  // vbar_0 = 0 contributes nothing regardless of w[0].
  double vbar = 0.0;
  double weighted = 0.0;
  for (size_t j = 0; j < n; ++j) {
    const Vec& b = v.basis()[j];
    double t = 0.0;
    for (size_t c = 0; c < ambient; ++c) t += (x[c] - v0[c]) * b[c];
    vbar += t * t;
    weighted += w[j + 1] * vbar;
  }

  double r = nsq - weighted;
  if (r < 0.0) {
    if (r < negative_clamp_floor(nsq, n)) {
      fail(errc::internal, "squared distance " + std::to_string(r) +
                               " is negative beyond the cancellation clamp");
    }
    r = 0.0;
  }
  return r;
}

double dist(const Vec& x, const Flat& v, const WeightVector& w) {
  return std::sqrt(dist_sq(x, v, w));
}

double energy(std::span<const Vec> points, const Flat& v, const WeightVector& w) {
  double sum = 0.0;
  for (const Vec& p : points) sum += dist_sq(p, v, w);
  return sum;
}

}  // namespace wkm
