#pragma once

#include <cstdint>
#include <vector>

#include "wkm/rng.hpp"
#include "wkm/types.hpp"

namespace wkm {

enum class InitMethod {
  random_points,    // k distinct points drawn uniformly
  kmeanspp,         // D^2 seeding over point-to-seed squared distances
  given_partition,  // start from an explicit assignment vector
};

struct ClusteringConfig {
  size_t k = 1;
  size_t n = 0;                   // flat dimension; 0 clusters around points
  WeightVector weights;           // arity must be n+1
  double epsilon = 1e-9;          // stop when the energy decrease falls below this
  bool relative_epsilon = false;  // interpret epsilon relative to the pre-step energy
  size_t max_iters = 100;
  size_t restarts = 16;
  uint64_t seed = 0;
  InitMethod init = InitMethod::random_points;
  std::vector<uint32_t> given_assignments;  // used by given_partition only
  unsigned threads = 1;
};

/// One restart's energy history. energies[0] is the post-init energy and
/// energies[t] the energy after iteration t; repairs[t-1] counts the
/// empty-cluster repairs performed during iteration t.
struct RestartTrace {
  std::vector<double> energies;
  std::vector<uint32_t> repairs;
};

struct RunTrace {
  std::vector<RestartTrace> restarts;
  size_t best_restart = 0;
};

struct RunResult {
  Clustering clustering;
  RunTrace trace;
};

/// Draws k distinct points with the given engine; each becomes a singleton
/// flat and points are assigned to the nearest seed point.
Clustering init_random_points(const Dataset& data, const ClusteringConfig& cfg,
                              rng::Engine& eng);
Clustering init_random_points(const Dataset& data, const ClusteringConfig& cfg);

/// k-means++ seeding: first seed uniform, then each next seed sampled with
/// probability proportional to the squared distance to the nearest chosen
/// seed. Coincident points carry zero mass and are never re-chosen; if every
/// remaining point has zero mass the next seed is uniform among unchosen
/// indices.
Clustering init_kmeanspp(const Dataset& data, const ClusteringConfig& cfg, rng::Engine& eng);
Clustering init_kmeanspp(const Dataset& data, const ClusteringConfig& cfg);

/// Builds the initial clustering from cfg.given_assignments. Clusters left
/// empty by the given partition are immediately reseeded with the
/// farthest-point repair rule.
Clustering init_given_partition(const Dataset& data, const ClusteringConfig& cfg);

/// One alternating iteration: refit flats of nonempty clusters, reassign all
/// points to the nearest flat (ties to the lowest index), run one
/// empty-cluster repair pass (each emptied cluster is reseeded with the point
/// farthest from its own flat, which becomes the cluster's new singleton
/// flat; donors keep at least one member), then recompute the energy. If
/// repair_count is non-null it receives the number of repairs performed.
Clustering lloyd_step(const Dataset& data, const Clustering& current,
                      const ClusteringConfig& cfg, uint32_t* repair_count = nullptr);

/// Recomputes the total energy of a clustering from scratch. Per-cluster sums
/// accumulate in point-index order and are combined in cluster order, so the
/// value is independent of any parallel execution.
double total_energy(const Dataset& data, const Clustering& clustering, const WeightVector& w);

/// Full run: cfg.restarts independent seeded starts (restart r uses the
/// engine seeded with splitmix64_at(cfg.seed, r)), each iterated until the
/// energy decrease drops below epsilon or max_iters is reached. Iterations
/// that performed an empty-cluster repair never trigger the stop check: the
/// reseeded cluster gets a full refit/reassign cycle before convergence is
/// judged. Returns the restart with the smallest final energy (lowest index
/// on ties). Restarts may be evaluated in parallel; results are
/// bit-identical for any thread count. given_partition collapses to a single
/// restart since every restart would start from the same assignment.
RunResult run(const Dataset& data, const ClusteringConfig& cfg);

}  // namespace wkm
