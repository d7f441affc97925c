#pragma once

#include <cstdint>
#include <random>
#include <vector>

// Deterministic randomness helpers. All sampling is built directly on the
// mt19937_64 output stream so results are identical on every platform; the
// standard library's distribution objects are never used.

namespace wkm::rng {

using Engine = std::mt19937_64;

/// SplitMix64 value at position `index` of the stream started at `seed`.
/// Used to derive independent sub-seeds (one per restart) from a user seed.
inline uint64_t splitmix64_at(uint64_t seed, uint64_t index) {
  uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline Engine make_engine(uint64_t seed, uint64_t stream) {
  return Engine(splitmix64_at(seed, stream));
}

/// Unbiased integer in [0, bound) via rejection sampling. bound must be > 0.
inline uint64_t next_below(Engine& eng, uint64_t bound) {
  const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  uint64_t r;
  do {
    r = eng();
  } while (r >= limit);
  return r % bound;
}

inline size_t uniform_index(Engine& eng, size_t n) {
  return static_cast<size_t>(next_below(eng, static_cast<uint64_t>(n)));
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Engine& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

/// k distinct indices from [0, n), drawn by partial Fisher-Yates shuffle.
inline std::vector<size_t> sample_distinct(Engine& eng, size_t n, size_t k) {
  std::vector<size_t> idx(n);
  for (size_t i = 0; i < n; ++i) idx[i] = i;
  for (size_t i = 0; i < k; ++i) {
    const size_t j = i + uniform_index(eng, n - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  return idx;
}

/// Index sampled proportionally to the given nonnegative masses by cumulative
/// inversion. Total mass must be positive. Zero-mass entries are never chosen.
inline size_t sample_discrete(Engine& eng, const std::vector<double>& mass) {
  double total = 0.0;
  for (double m : mass) total += m;
  const double u = uniform01(eng) * total;
  double cum = 0.0;
  size_t last_positive = 0;
  for (size_t i = 0; i < mass.size(); ++i) {
    if (mass[i] > 0.0) last_positive = i;
    cum += mass[i];
    if (cum > u) return i;
  }
  return last_positive;  // guards against cum never exceeding u at the tail
}

}  // namespace wkm::rng
