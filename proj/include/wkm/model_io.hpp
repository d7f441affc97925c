#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wkm/types.hpp"

namespace wkm {

/// One point per line, comma-separated decimals; blank lines and lines
/// starting with '#' are skipped. All rows must share one arity.
Dataset read_points_csv(const std::string& path);

struct FlatsFile {
  std::vector<Flat> flats;
  size_t ambient_dim = 0;
  size_t flat_dim = 0;
};

/// Text flats file: first line "N n", then groups of n+1 coordinate lines
/// (center, then basis rows) separated by blank lines. Basis orthonormality
/// is validated on load.
FlatsFile read_flats(const std::string& path);

/// One cluster index per line (the --init file: format).
std::vector<uint32_t> read_assignments_csv(const std::string& path);
void write_assignments_csv(const std::string& path, const std::vector<uint32_t>& assignments);

struct ModelFile {
  Clustering clustering;
  WeightVector weights;
  size_t ambient_dim = 0;
};

/// Text model serialization, 17 significant digits throughout so that
/// parse(serialize(x)) reproduces x bit-exactly. Layout:
///   WKMEANS 1
///   N n k m iterations converged
///   w0 ... wn
///   energy
///   k groups of n+1 coordinate lines (center, then basis rows)
///   m assignment lines
void write_model(const std::string& path, const Clustering& clustering, const WeightVector& w,
                 size_t ambient_dim);
ModelFile read_model(const std::string& path);

}  // namespace wkm
