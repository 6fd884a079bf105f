#pragma once

// Direct sums of 2x2 blocks [[0, i b], [-i a, 0]] over a positive weight
// sequence, with b = 1 (identity rule) or b = 1/a (inverse rule).

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "blockspec/block_core.hpp"

namespace blockspec {

enum class BRule { identity, inverse };

std::string_view to_string(BRule r) noexcept;

struct DiagonalModel {
  std::vector<double> weights;  ///< a_1 < a_2 < ... , all > 0
  BRule b_rule = BRule::identity;

  /// Throws NonPositiveWeight.
  void validate() const;
  /// A = diag(a), B = I or diag(1/a), C = 0.
  BlockCoefficients coefficients() const;
};

/// Throws NonPositiveWeight for a <= 0.
CMatrix model_block(double a, BRule rule);

struct BlockEigendata {
  std::array<cplx, 2> values;  ///< (positive, negative)
  CMatrix vectors;             ///< unit columns in the same order
  double cos_angle = 0.0;
};

BlockEigendata block_eigendata(double a, BRule rule);

/// Riesz projector (L - l_-)/(l_+ - l_-) onto the positive eigenvalue, from
/// numerically computed eigenvalues. Throws DegenerateEigenvalues.
CMatrix riesz_projector(double a, BRule rule, bool positive = true);
double projector_norm(double a, BRule rule);
/// (a + 1) / (2 sqrt a) for the identity rule, (1 + a^2) / (2a) for the inverse rule.
double projector_norm_closed_form(double a, BRule rule);

struct ProjectorGrowth {
  std::vector<double> weights;
  std::vector<double> norms;
  double exponent = 0.0;  ///< OLS slope of log ||P|| against log a
  bool monotone = false;  ///< non-decreasing over weights >= 1
  bool singular_critical_point_evidence = false;
};

ProjectorGrowth projector_growth_scan(const DiagonalModel& model);

struct TInverseScan {
  cplx z;
  std::vector<std::size_t> truncation;  ///< N
  std::vector<double> norms;            ///< ||T(z)^{-1}|| using the first N weights
  bool nondecreasing = false;
  double last = 0.0;
};

/// Truncations default to 1, 2, 4, ... and the full length. Throws ZSquaredInSpectrum.
TInverseScan t_inverse_norm_scan(const DiagonalModel& model, cplx z,
                                 std::span<const std::size_t> truncations = {});

struct DefinitizabilityProbe {
  double t_at_plus_one = 0.0;   ///< max |entry| of T(1)
  double t_at_minus_one = 0.0;  ///< max |entry| of T(-1)
  TInverseScan scan;
  /// max over truncations of |norm - a_N/|1 - z^2|| / (a_N/|1 - z^2|).
  double linear_fit_error = 0.0;
  bool resolvent_empty_in_limit = false;
  std::string note;
};

/// Inverse rule only (WrongRule otherwise).
DefinitizabilityProbe definitizability_probe(const DiagonalModel& model, cplx z = {0.0, 2.0},
                                             std::span<const std::size_t> truncations = {});

}  // namespace blockspec
