#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace mvgc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class ErrorCode {
  non_finite,
  degenerate_scale,
  k_out_of_range,
  isolated_vertex,
  no_convergence,
  dimension_mismatch,
  singular_system,
  c_too_large,
  method_requires_square,
  length_mismatch,
  no_progress,
  parse_error,
  shape_mismatch,
  asymmetric_graph,
  invalid_argument,
};

const char* to_string(ErrorCode code);

// Carries a stable machine-readable code plus the stage or file that failed.
// The CLI maps these fields onto its error JSON.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail, std::string where = "");

  ErrorCode code() const { return code_; }
  const std::string& where() const { return where_; }

 private:
  ErrorCode code_;
  std::string where_;
};

}  // namespace mvgc
