#include "blockspec/error.hpp"

namespace blockspec {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "InvalidArgument";
    case ErrorKind::dimension_mismatch: return "DimensionMismatch";
    case ErrorKind::non_finite: return "NonFinite";
    case ErrorKind::not_hermitian: return "NotHermitian";
    case ErrorKind::convergence_failure: return "ConvergenceFailure";
    case ErrorKind::singular_matrix: return "SingularMatrix";
    case ErrorKind::singular_a: return "SingularA";
    case ErrorKind::non_hermitian_a: return "NonHermitianA";
    case ErrorKind::non_hermitian_b: return "NonHermitianB";
    case ErrorKind::z_in_spectrum_a: return "ZInSpectrumA";
    case ErrorKind::degenerate_inertia: return "DegenerateInertia";
    case ErrorKind::resolvent_singular: return "ResolventSingular";
    case ErrorKind::t_singular: return "TSingular";
    case ErrorKind::domain_violation: return "DomainViolation";
    case ErrorKind::symbol_singular: return "SymbolSingular";
    case ErrorKind::positivity_violated: return "PositivityViolated";
    case ErrorKind::non_positive_weight: return "NonPositiveWeight";
    case ErrorKind::degenerate_eigenvalues: return "DegenerateEigenvalues";
    case ErrorKind::z_squared_in_spectrum: return "ZSquaredInSpectrum";
    case ErrorKind::wrong_rule: return "WrongRule";
    case ErrorKind::nu_out_of_range: return "NuOutOfRange";
    case ErrorKind::singular_hv: return "SingularHV";
    case ErrorKind::singular_factor: return "SingularFactor";
    case ErrorKind::invalid_potential: return "InvalidPotential";
    case ErrorKind::parse_error: return "ParseError";
    case ErrorKind::validation_error: return "ValidationError";
    case ErrorKind::io_error: return "IoError";
  }
  return "Unknown";
}

bool is_numerical(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument:
    case ErrorKind::dimension_mismatch:
    case ErrorKind::nu_out_of_range:
    case ErrorKind::wrong_rule:
    case ErrorKind::non_positive_weight:
    case ErrorKind::invalid_potential:
    case ErrorKind::parse_error:
    case ErrorKind::validation_error:
    case ErrorKind::io_error:
      return false;
    default:
      return true;
  }
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace blockspec
