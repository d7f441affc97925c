#include "wkm/wkmeans.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wkm/distance.hpp"
#include "wkm/parallel.hpp"
#include "wkm/pca.hpp"

namespace wkm {

namespace {

void validate_config(const Dataset& data, const ClusteringConfig& cfg) {
  if (cfg.k == 0) fail(errc::invalid_config, "cluster count k must be at least 1");
  if (cfg.k > data.size()) {
    fail(errc::k_too_large, "k = " + std::to_string(cfg.k) + " exceeds the dataset size " +
                                std::to_string(data.size()));
  }
  if (cfg.n >= data.dim()) {
    fail(errc::dimension_too_large,
         "flat dimension " + std::to_string(cfg.n) + " must be below the ambient dimension " +
             std::to_string(data.dim()));
  }
  if (cfg.weights.arity() != cfg.n + 1) {
    fail(errc::dimension_mismatch, "weight arity " + std::to_string(cfg.weights.arity()) +
                                       " does not match flat dimension " + std::to_string(cfg.n));
  }
  if (!(cfg.epsilon > 0.0)) fail(errc::invalid_config, "epsilon must be positive");
  if (cfg.max_iters == 0) fail(errc::invalid_config, "max_iters must be at least 1");
  if (cfg.restarts == 0) fail(errc::invalid_config, "restarts must be at least 1");
  if (cfg.init == InitMethod::given_partition) {
    if (cfg.given_assignments.size() != data.size()) {
      fail(errc::invalid_config,
           "given partition has " + std::to_string(cfg.given_assignments.size()) +
               " entries for " + std::to_string(data.size()) + " points");
    }
    for (size_t i = 0; i < cfg.given_assignments.size(); ++i) {
      if (cfg.given_assignments[i] >= cfg.k) {
        fail(errc::invalid_config, "given partition assigns point " + std::to_string(i) +
                                       " to cluster " + std::to_string(cfg.given_assignments[i]) +
                                       " but k = " + std::to_string(cfg.k));
      }
    }
  }
}

double sq_point_dist(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (size_t c = 0; c < a.size(); ++c) {
    const double d = a[c] - b[c];
    s += d * d;
  }
  return s;
}

/// Per-cluster energy sums accumulated in point-index order, combined in
/// cluster order. Both loops are fixed so the result never depends on how
/// the per-point distances were produced.
double sum_energy(const std::vector<uint32_t>& assignments, const std::vector<double>& dists,
                  size_t k) {
  std::vector<double> per_cluster(k, 0.0);
  for (size_t i = 0; i < assignments.size(); ++i) per_cluster[assignments[i]] += dists[i];
  double total = 0.0;
  for (size_t j = 0; j < k; ++j) total += per_cluster[j];
  return total;
}

std::vector<Vec> gather(const Dataset& data, const std::vector<uint32_t>& assignments,
                        uint32_t cluster) {
  std::vector<Vec> members;
  for (size_t i = 0; i < assignments.size(); ++i) {
    if (assignments[i] == cluster) members.push_back(data[i]);
  }
  return members;
}

/// Builds the first clustering from chosen seed indices: singleton flats and
/// nearest-seed-point assignment, with the energy over the resulting pair.
Clustering clustering_from_seeds(const Dataset& data, const ClusteringConfig& cfg,
                                 const std::vector<size_t>& seeds) {
  const size_t m = data.size();
  const size_t k = seeds.size();
  std::vector<Flat> flats;
  flats.reserve(k);
  for (size_t j = 0; j < k; ++j) {
    const std::vector<Vec> seed_point = {data[seeds[j]]};
    flats.push_back(fit_flat(seed_point, cfg.n));
  }

  std::vector<uint32_t> assignments(m, 0);
  std::vector<double> dists(m, 0.0);
  detail::parallel_chunks(m, cfg.threads, [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      uint32_t best = 0;
      double best_d = sq_point_dist(data[i], data[seeds[0]]);
      for (uint32_t j = 1; j < k; ++j) {
        const double d = sq_point_dist(data[i], data[seeds[j]]);
        if (d < best_d) {
          best_d = d;
          best = j;
        }
      }
      assignments[i] = best;
      dists[i] = dist_sq(data[i], flats[best], cfg.weights);
    }
  });

  Clustering c;
  c.assignments = std::move(assignments);
  c.flats = std::move(flats);
  c.energy = sum_energy(c.assignments, dists, k);
  return c;
}

/// Reseeds each empty cluster with the point having the largest distance to
/// its own flat, taken only from clusters that keep at least one member. The
/// stolen point becomes the cluster's new singleton flat, so its error drops
/// to zero and the total energy never rises. Updates flats, assignments,
/// counts and dists in place; returns the number of repairs.
uint32_t repair_empty_clusters(const Dataset& data, const ClusteringConfig& cfg,
                               std::vector<Flat>& flats, std::vector<uint32_t>& assignments,
                               std::vector<size_t>& counts, std::vector<double>& dists) {
  uint32_t repairs = 0;
  const size_t k = counts.size();
  for (size_t j = 0; j < k; ++j) {
    if (counts[j] != 0) continue;
    size_t pick = data.size();
    double pick_d = -1.0;
    for (size_t i = 0; i < data.size(); ++i) {
      if (counts[assignments[i]] < 2) continue;
      if (dists[i] > pick_d) {
        pick_d = dists[i];
        pick = i;
      }
    }
    if (pick == data.size()) continue;  // no donor can spare a point
    counts[assignments[pick]] -= 1;
    assignments[pick] = static_cast<uint32_t>(j);
    counts[j] = 1;
    const std::vector<Vec> seed_point = {data[pick]};
    flats[j] = fit_flat(seed_point, cfg.n);
    dists[pick] = dist_sq(data[pick], flats[j], cfg.weights);
    ++repairs;
  }
  return repairs;
}

}  // namespace

Clustering init_random_points(const Dataset& data, const ClusteringConfig& cfg,
                              rng::Engine& eng) {
  validate_config(data, cfg);
  const std::vector<size_t> seeds = rng::sample_distinct(eng, data.size(), cfg.k);
  return clustering_from_seeds(data, cfg, seeds);
}

Clustering init_random_points(const Dataset& data, const ClusteringConfig& cfg) {
  rng::Engine eng = rng::make_engine(cfg.seed, 0);
  return init_random_points(data, cfg, eng);
}

Clustering init_kmeanspp(const Dataset& data, const ClusteringConfig& cfg, rng::Engine& eng) {
  validate_config(data, cfg);
  const size_t m = data.size();
  std::vector<size_t> seeds;
  seeds.reserve(cfg.k);
  std::vector<char> chosen(m, 0);

  const size_t first = rng::uniform_index(eng, m);
  seeds.push_back(first);
  chosen[first] = 1;

  std::vector<double> min_d(m);
  for (size_t i = 0; i < m; ++i) min_d[i] = sq_point_dist(data[i], data[first]);

  while (seeds.size() < cfg.k) {
    double total = 0.0;
    for (double d : min_d) total += d;
    size_t next;
    if (total > 0.0) {
      next = rng::sample_discrete(eng, min_d);
    } else {
      // Every remaining point coincides with a seed; fall back to a uniform
      // choice among the unchosen indices.
      size_t r = rng::uniform_index(eng, m - seeds.size());
      next = 0;
      for (size_t i = 0; i < m; ++i) {
        if (chosen[i]) continue;
        if (r == 0) {
          next = i;
          break;
        }
        --r;
      }
    }
    seeds.push_back(next);
    chosen[next] = 1;
    for (size_t i = 0; i < m; ++i) {
      min_d[i] = std::min(min_d[i], sq_point_dist(data[i], data[next]));
    }
  }
  return clustering_from_seeds(data, cfg, seeds);
}

Clustering init_kmeanspp(const Dataset& data, const ClusteringConfig& cfg) {
  rng::Engine eng = rng::make_engine(cfg.seed, 0);
  return init_kmeanspp(data, cfg, eng);
}

Clustering init_given_partition(const Dataset& data, const ClusteringConfig& cfg) {
  validate_config(data, cfg);
  if (cfg.init != InitMethod::given_partition) {
    fail(errc::invalid_config, "init_given_partition requires cfg.init = given_partition");
  }
  const size_t m = data.size();
  const size_t k = cfg.k;
  std::vector<uint32_t> assignments = cfg.given_assignments;
  std::vector<size_t> counts(k, 0);
  for (uint32_t a : assignments) counts[a] += 1;

  std::vector<Flat> flats;
  flats.reserve(k);
  {
    // Partition flats are fitted up front; empty clusters get a placeholder
    // replaced by the repair below.
    std::vector<Vec> placeholder_pt = {data[0]};
    const Flat placeholder = fit_flat(placeholder_pt, cfg.n);
    for (size_t j = 0; j < k; ++j) {
      if (counts[j] == 0) {
        flats.push_back(placeholder);
      } else {
        const std::vector<Vec> members = gather(data, assignments, static_cast<uint32_t>(j));
        flats.push_back(fit_flat(members, cfg.n));
      }
    }
  }

  std::vector<double> dists(m);
  for (size_t i = 0; i < m; ++i) dists[i] = dist_sq(data[i], flats[assignments[i]], cfg.weights);

  for (size_t j = 0; j < k; ++j) {
    if (counts[j] != 0) continue;
    size_t pick = m;
    double pick_d = -1.0;
    for (size_t i = 0; i < m; ++i) {
      if (counts[assignments[i]] < 2) continue;
      if (dists[i] > pick_d) {
        pick_d = dists[i];
        pick = i;
      }
    }
    if (pick == m) continue;
    counts[assignments[pick]] -= 1;
    assignments[pick] = static_cast<uint32_t>(j);
    counts[j] = 1;
    const std::vector<Vec> single = {data[pick]};
    flats[j] = fit_flat(single, cfg.n);
    dists[pick] = dist_sq(data[pick], flats[j], cfg.weights);
  }

  Clustering c;
  c.assignments = std::move(assignments);
  c.flats = std::move(flats);
  c.energy = sum_energy(c.assignments, dists, k);
  return c;
}

Clustering lloyd_step(const Dataset& data, const Clustering& current,
                      const ClusteringConfig& cfg, uint32_t* repair_count) {
  const size_t m = data.size();
  const size_t k = current.flats.size();
  if (current.assignments.size() != m) {
    fail(errc::dimension_mismatch, "clustering has " + std::to_string(current.assignments.size()) +
                                       " assignments for " + std::to_string(m) + " points");
  }

  // Fit step: refit every nonempty cluster; empty clusters keep their flat.
  std::vector<size_t> counts(k, 0);
  for (uint32_t a : current.assignments) counts[a] += 1;
  std::vector<Flat> flats = current.flats;
  detail::parallel_chunks(k, cfg.threads, [&](size_t begin, size_t end) {
    for (size_t j = begin; j < end; ++j) {
      if (counts[j] == 0) continue;
      const std::vector<Vec> members = gather(data, current.assignments, static_cast<uint32_t>(j));
      flats[j] = fit_flat(members, cfg.n);
    }
  });

  // Assign step: nearest flat, ties to the lowest cluster index.
  std::vector<uint32_t> assignments(m, 0);
  std::vector<double> dists(m, 0.0);
  detail::parallel_chunks(m, cfg.threads, [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      uint32_t best = 0;
      double best_d = dist_sq(data[i], flats[0], cfg.weights);
      for (uint32_t j = 1; j < k; ++j) {
        const double d = dist_sq(data[i], flats[j], cfg.weights);
        if (d < best_d) {
          best_d = d;
          best = j;
        }
      }
      assignments[i] = best;
      dists[i] = best_d;
    }
  });

  counts.assign(k, 0);
  for (uint32_t a : assignments) counts[a] += 1;
  const uint32_t repairs = repair_empty_clusters(data, cfg, flats, assignments, counts, dists);
  if (repair_count != nullptr) *repair_count = repairs;

  Clustering next;
  next.assignments = std::move(assignments);
  next.flats = std::move(flats);
  next.energy = sum_energy(next.assignments, dists, k);
  next.iterations_run = current.iterations_run + 1;
  return next;
}

double total_energy(const Dataset& data, const Clustering& clustering, const WeightVector& w) {
  const size_t m = data.size();
  const size_t k = clustering.flats.size();
  if (clustering.assignments.size() != m) {
    fail(errc::dimension_mismatch, "clustering does not match the dataset size");
  }
  std::vector<double> dists(m);
  for (size_t i = 0; i < m; ++i) {
    const uint32_t a = clustering.assignments[i];
    if (a >= k) fail(errc::invalid_config, "assignment out of range");
    dists[i] = dist_sq(data[i], clustering.flats[a], w);
  }
  return sum_energy(clustering.assignments, dists, k);
}

RunResult run(const Dataset& data, const ClusteringConfig& cfg) {
  validate_config(data, cfg);
  const size_t restarts = cfg.init == InitMethod::given_partition ? 1 : cfg.restarts;

  const unsigned outer_threads = static_cast<unsigned>(
      std::min<size_t>(cfg.threads == 0 ? 1 : cfg.threads, restarts));
  ClusteringConfig inner = cfg;
  inner.threads = outer_threads > 1 ? 1 : cfg.threads;

  std::vector<Clustering> results(restarts);
  std::vector<RestartTrace> traces(restarts);

  detail::parallel_chunks(restarts, outer_threads, [&](size_t begin, size_t end) {
    for (size_t r = begin; r < end; ++r) {
      rng::Engine eng = rng::make_engine(cfg.seed, r);
      Clustering cur;
      switch (cfg.init) {
        case InitMethod::random_points:
          cur = init_random_points(data, inner, eng);
          break;
        case InitMethod::kmeanspp:
          cur = init_kmeanspp(data, inner, eng);
          break;
        case InitMethod::given_partition:
          cur = init_given_partition(data, inner);
          break;
      }
      RestartTrace trace;
      trace.energies.push_back(cur.energy);
      for (size_t t = 0; t < cfg.max_iters; ++t) {
        const double before = cur.energy;
        uint32_t repairs = 0;
        Clustering next = lloyd_step(data, cur, inner, &repairs);
        trace.energies.push_back(next.energy);
        trace.repairs.push_back(repairs);
        const double decrease = before - next.energy;
        cur = std::move(next);
        if (repairs == 0) {
          const double threshold = cfg.relative_epsilon ? cfg.epsilon * before : cfg.epsilon;
          // decrease <= 0 without a repair is a fixed point.
          if (decrease < threshold || decrease <= 0.0) {
            cur.converged = true;
            break;
          }
        }
      }
      results[r] = std::move(cur);
      traces[r] = std::move(trace);
    }
  });

  size_t best = 0;
  for (size_t r = 1; r < restarts; ++r) {
    if (results[r].energy < results[best].energy) best = r;
  }
  RunResult out;
  out.clustering = std::move(results[best]);
  out.trace.restarts = std::move(traces);
  out.trace.best_restart = best;
  return out;
}

}  // namespace wkm
