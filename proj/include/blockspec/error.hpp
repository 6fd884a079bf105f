#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace blockspec {

enum class ErrorKind {
  invalid_argument,
  dimension_mismatch,
  non_finite,
  not_hermitian,
  convergence_failure,
  singular_matrix,
  // block-core
  singular_a,
  non_hermitian_a,
  non_hermitian_b,
  z_in_spectrum_a,
  degenerate_inertia,
  resolvent_singular,
  t_singular,
  // symbol-calculus
  domain_violation,
  symbol_singular,
  positivity_violated,
  // direct-sum models
  non_positive_weight,
  degenerate_eigenvalues,
  z_squared_in_spectrum,
  wrong_rule,
  // schrodinger-block
  nu_out_of_range,
  singular_hv,
  singular_factor,
  invalid_potential,
  // cli-report
  parse_error,
  validation_error,
  io_error,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Numerical failures map to CLI exit code 3; everything else that is not
/// an I/O problem is a usage or configuration error (exit code 2).
bool is_numerical(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace blockspec
