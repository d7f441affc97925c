#include "wkm/errors.hpp"

namespace wkm {

const char* errc_name(errc c) {
  switch (c) {
    case errc::negative_weight: return "NegativeWeight";
    case errc::sum_not_one: return "SumNotOne";
    case errc::all_zero: return "AllZero";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::dimension_too_large: return "DimensionTooLarge";
    case errc::empty_set: return "EmptySet";
    case errc::empty_image: return "EmptyImage";
    case errc::empty_file: return "EmptyFile";
    case errc::not_orthonormal: return "NotOrthonormal";
    case errc::not_symmetric: return "NotSymmetric";
    case errc::no_convergence: return "NoConvergence";
    case errc::k_too_large: return "KTooLarge";
    case errc::too_few_flats: return "TooFewFlats";
    case errc::invalid_config: return "InvalidConfig";
    case errc::ragged_rows: return "RaggedRows";
    case errc::parse_error: return "ParseError";
    case errc::unsupported_format: return "UnsupportedFormat";
    case errc::malformed_header: return "MalformedHeader";
    case errc::malformed_model: return "MalformedModel";
    case errc::size_mismatch: return "SizeMismatch";
    case errc::io_error: return "IoError";
    case errc::internal: return "InternalError";
  }
  return "UnknownError";
}

Error::Error(errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

void fail(errc code, const std::string& message) { throw Error(code, message); }

}  // namespace wkm
