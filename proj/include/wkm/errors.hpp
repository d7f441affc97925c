#pragma once

#include <stdexcept>
#include <string>

namespace wkm {

enum class errc {
  negative_weight,
  sum_not_one,
  all_zero,
  dimension_mismatch,
  dimension_too_large,
  empty_set,
  empty_image,
  empty_file,
  not_orthonormal,
  not_symmetric,
  no_convergence,
  k_too_large,
  too_few_flats,
  invalid_config,
  ragged_rows,
  parse_error,
  unsupported_format,
  malformed_header,
  malformed_model,
  size_mismatch,
  io_error,
  internal,
};

const char* errc_name(errc c);

/// Library error carrying a machine-checkable code plus a human message.
class Error : public std::runtime_error {
public:
  Error(errc code, const std::string& message);
  errc code() const { return code_; }

private:
  errc code_;
};

[[noreturn]] void fail(errc code, const std::string& message);

}  // namespace wkm
