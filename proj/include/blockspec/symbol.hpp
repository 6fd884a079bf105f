#pragma once

// Pointwise 2x2 analysis of multiplication operators with symbol
// [[a, c*], [c, b]] and of the constant-coefficient symbol
// a = l^2 + m^2, b = 1, |c| = |nu l|.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "blockspec/cmatrix.hpp"
#include "blockspec/polynomial.hpp"

namespace blockspec {

struct SymbolTriple {
  enum class Kind { closed_form, sampled };

  Kind kind = Kind::closed_form;
  Rational a;
  Rational b;
  Rational c;
  std::vector<double> grid;  ///< sampled only, strictly increasing
  std::vector<cplx> a_s;
  std::vector<cplx> b_s;
  std::vector<cplx> c_s;
  std::string label;

  static SymbolTriple closed_form(Rational a, Rational b, Rational c, std::string label = {});
  /// Linear interpolation between samples; no tail model.
  static SymbolTriple sampled(std::vector<double> grid, std::vector<cplx> a, std::vector<cplx> b,
                              std::vector<cplx> c, std::string label = {});

  bool in_domain(double lambda) const noexcept;
  /// Throw DomainViolation outside the domain.
  cplx a_at(double lambda) const;
  cplx b_at(double lambda) const;
  cplx c_at(double lambda) const;
};

struct GLSymbolParams {
  double m = 1.0;
  double nu = 0.5;

  /// m > 0 and |nu| < 1, else InvalidArgument / NuOutOfRange. nu = 0 is
  /// accepted here as the decoupled limit.
  void validate() const;
};

/// `fourier`: c = -i nu l, the transform of nu d/dx, giving the symbol of L
/// [[nu l, i], [-i(l^2 + m^2), nu l]]. `real`: c = nu l, unitarily equivalent
/// through diag(1, i); same eigenvalues and determinant, different resolvent
/// entries.
enum class SymbolGauge { fourier, real };

SymbolTriple gl_symbol(const GLSymbolParams& p, SymbolGauge gauge = SymbolGauge::fourier);

struct Band {
  double lo = 0.0;
  double hi = 0.0;  ///< may be +infinity
  friend bool operator==(const Band&, const Band&) = default;
};

struct BandSet {
  std::vector<Band> bands;  ///< disjoint, sorted

  bool contains(double x) const noexcept;
  double distance(double x) const noexcept;
  /// Sort and merge touching or overlapping intervals.
  static BandSet merged(std::vector<Band> raw);
};

/// 20001 symmetric points: 10001 uniform on [-10, 10], 5000 geometric per side out to 1e6.
std::vector<double> default_lambda_grid();
/// 20001 points on l >= 0: uniform on [0, 1], l^2 uniform on [1, 12], then geometric out to 1e4.
std::vector<double> band_sweep_grid();

CMatrix symbol_matrix_A(const SymbolTriple& s, double lambda);
/// [[i c, i b], [-i a, -i c*]].
CMatrix symbol_matrix_L(const SymbolTriple& s, double lambda);

/// l^2 (1 - z - nu^2) + (m^2 - z)(1 - z).
cplx symbol_det_A(const GLSymbolParams& p, double lambda, cplx z);

BandSet ess_spectrum_bands(const GLSymbolParams& p);

/// (z - m^2)(z - 1) / (z - (1 - nu^2)) >= 0, with z = 1 - nu^2 a member.
bool band_membership(const GLSymbolParams& p, double z);

struct BandFill {
  double hausdorff = 0.0;    ///< max of the two directed distances below
  double max_outside = 0.0;  ///< sample eigenvalue farthest from the bands
  double max_uncovered = 0.0;///< band point farthest from any sample (unbounded bands windowed)
  std::size_t samples = 0;
  double band_tol = 0.0;
  bool ok = false;
};

/// Sweeps the eigenvalues of the symbol matrix over `grid` (band_sweep_grid()
/// when empty) and measures how well they fill the bands; unbounded bands are
/// checked on [lo, lo + window].
BandFill band_fill_check(const GLSymbolParams& p, double band_tol = 1e-3, double window = 10.0,
                         std::span<const double> grid = {});

struct SupResult {
  double value = 0.0;      ///< max(grid_sup, tail_limit), infinity at a pole
  double grid_sup = 0.0;
  double grid_arg = 0.0;   ///< lambda attaining grid_sup
  double tail_limit = 0.0;
  bool tail_known = true;  ///< false for sampled symbols: the value is a lower bound only
  bool pole = false;       ///< denominator has a real zero
  std::vector<double> pole_locations;
  std::size_t near_zero = 0;  ///< grid points where |denominator| <= near_zero_abs

  bool finite() const noexcept;
};

inline constexpr double kNearZeroAbs = 1e-12;

struct ResolventMembership {
  bool in_resolvent = false;
  SupResult sup;
  double ess_sup_cap = 0.0;
};

/// sup |a / (ab - (c + iz)(c* - iz))|.
ResolventMembership resolvent_membership(const SymbolTriple& s, cplx z, std::span<const double> grid,
                                         double ess_sup_cap = 1e8);

struct LSymbolSpectrum {
  BandSet bands;
  double gap_closed_form = 0.0;  ///< m sqrt(1 - nu^2)
  double gap_sweep_hi = 0.0;     ///< min of the upper branch, sweep plus local refinement
  double gap_sweep_lo = 0.0;     ///< max of the lower branch
};

LSymbolSpectrum spectrum_L_symbol(const GLSymbolParams& p, std::span<const double> grid = {});

struct RealSpectrumCriterion {
  bool holds = false;
  double min_positivity = 0.0;  ///< min over the grid of ab - |c|^2
  SupResult sup;
};

/// Checks ab - |c|^2 >= 0 first (PositivityViolated), then sup |a / (ab - (c - 1)(c* + 1))|.
RealSpectrumCriterion real_spectrum_criterion(const SymbolTriple& s, std::span<const double> grid,
                                              double ess_sup_cap = 1e8);

enum class LrgIntegrand {
  full,             ///< (|a| + |b| + |z|) / |ab - (c - iz)(c* + iz)|
  resolvent_entry,  ///< |a| / |ab - (c - iz)(c* + iz)|
};

/// Throws InvalidArgument for real z.
SupResult lrg_sup(const SymbolTriple& s, cplx z, std::span<const double> grid,
                  LrgIntegrand integrand = LrgIntegrand::full);

/// (L(l) - z)^{-1} from the explicit 2x2 formula. Throws SymbolSingular.
CMatrix symbol_resolvent(const SymbolTriple& s, double lambda, cplx z);

}  // namespace blockspec
