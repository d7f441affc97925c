#pragma once

#include <span>

#include "wkm/types.hpp"

namespace wkm {

/// Squared weighted distance from x to the nested subspaces of a flat:
/// the omega-weighted sum of squared distances from x to the affine spans
/// of the first 0..n basis vectors, evaluated with the cumulative-projection
/// shortcut  ||x-v0||^2 - sum_j w_j * vbar_j  where vbar_j accumulates the
/// squared projections onto the first j basis vectors (vbar_0 = 0).
double dist_sq(const Vec& x, const Flat& v, const WeightVector& w);

/// sqrt(dist_sq).
double dist(const Vec& x, const Flat& v, const WeightVector& w);

/// Sum of dist_sq over a point range; 0 for an empty range.
double energy(std::span<const Vec> points, const Flat& v, const WeightVector& w);

}  // namespace wkm
