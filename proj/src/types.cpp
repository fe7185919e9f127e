#include "mvgc/types.hpp"

namespace mvgc {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::non_finite: return "non_finite";
    case ErrorCode::degenerate_scale: return "degenerate_scale";
    case ErrorCode::k_out_of_range: return "k_out_of_range";
    case ErrorCode::isolated_vertex: return "isolated_vertex";
    case ErrorCode::no_convergence: return "no_convergence";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::singular_system: return "singular_system";
    case ErrorCode::c_too_large: return "c_too_large";
    case ErrorCode::method_requires_square: return "method_requires_square";
    case ErrorCode::length_mismatch: return "length_mismatch";
    case ErrorCode::no_progress: return "no_progress";
    case ErrorCode::parse_error: return "parse_error";
    case ErrorCode::shape_mismatch: return "shape_mismatch";
    case ErrorCode::asymmetric_graph: return "asymmetric_graph";
    case ErrorCode::invalid_argument: return "invalid_argument";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& detail, std::string where)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail),
      code_(code),
      where_(std::move(where)) {}

}  // namespace mvgc
