#pragma once

// Finite-difference version of H_V = -d^2/dx^2 + m^2 + V on [-L, L] with
// Dirichlet ends, the derivative block C = nu D, and the operator
// L = J [[H_V, -nu D], [nu D, I]].

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "blockspec/block_core.hpp"
#include "blockspec/symbol.hpp"

namespace blockspec {

/// Nodes x_k = -L + k h, k = 0..n-1, h = 2L/(n-1). The unknowns are the
/// interior nodes x_1..x_{n-2}; the two end nodes carry the Dirichlet condition.
struct Grid1D {
  double half_length = 40.0;
  std::size_t points = 800;

  /// Throws InvalidArgument for L <= 0 or n < 3.
  void validate() const;
  double spacing() const noexcept { return 2.0 * half_length / static_cast<double>(points - 1); }
  std::size_t unknowns() const noexcept { return points - 2; }
  /// Interior node j (0-based), i.e. x_{j+1}.
  double x(std::size_t j) const noexcept {
    return -half_length + static_cast<double>(j + 1) * spacing();
  }
  std::vector<double> interior_nodes() const;
};

struct Potential {
  enum class Kind { zero, square_well, gaussian, samples };

  Kind kind = Kind::zero;
  double depth = 0.0;      ///< square well: V = -depth on |x| < width / 2
  double width = 0.0;
  double amplitude = 0.0;  ///< gaussian: amplitude exp(-x^2 / (2 sigma^2))
  double sigma = 1.0;
  std::vector<double> xs;  ///< samples: linear interpolation, 0 outside [xs.front(), xs.back()]
  std::vector<double> vs;

  static Potential zero() { return {}; }
  static Potential square_well(double depth, double width);
  static Potential gaussian(double amplitude, double sigma);
  static Potential samples(std::vector<double> xs, std::vector<double> vs);
  /// Two columns "x, V" per line; '#' comments and one header line allowed.
  /// Throws IoError or InvalidPotential (with line number).
  static Potential from_csv(const std::string& path);

  double operator()(double x) const;
  std::string describe() const;
};

/// Values of V on the interior nodes.
std::vector<double> sample_potential(const Grid1D& grid, const Potential& v);

/// Throws InvalidPotential unless max |V| over the outer 10% of the grid is at
/// most 1e-6 max |V|.
void check_potential_decay(const Grid1D& grid, const Potential& v);

CMatrix discretize_HV(const Grid1D& grid, double m, const Potential& v);
/// (-1, 2, -1)/h^2 scaled by `kinetic`, plus diag(m^2 + V).
CMatrix discretize_scaled_HV(const Grid1D& grid, double kinetic, double m, const Potential& v);
/// Central differences (f_{k+1} - f_{k-1}) / (2h), Dirichlet neighbours
/// dropped at both ends; D^T = -D exactly.
CMatrix discretize_D(const Grid1D& grid);

struct GLDiscretization {
  Grid1D grid;
  double m = 1.0;
  double nu = 0.5;
  Potential potential;
  CMatrix H_V;
  CMatrix D;
  BlockCoefficients coeffs;  ///< A = H_V, B = I, C = nu D
  Inertia kappa_HV;
};

/// Throws NuOutOfRange (|nu| >= 1 or nu = 0), SingularHV, InvalidPotential.
GLDiscretization assemble_gl(const Grid1D& grid, double m, double nu, const Potential& v);

/// I + nu^2 D H_V^{-1} D.
CMatrix schur_S0_gl(const GLDiscretization& d);
/// I + (nu D + iz) H_V^{-1} (nu D + iz).
CMatrix T_gl(const GLDiscretization& d, cplx z);

/// Relative residual of (nu D - y)^{-1} T(iy) (nu D - y)^{-1} = (nu D - y)^{-2} + H_V^{-1}.
/// Throws SingularFactor, InvalidArgument for y <= 0.
double factorization_identity_check(const GLDiscretization& d, double y);

struct GreensCheck {
  double max_abs_error = 0.0;   ///< max |(H_0^{-1})_{ij} / h - G(x_i, x_j)| over the window
  double normwise_rel = 0.0;    ///< max_abs_error / max G = max_abs_error * 2m
  double pointwise_rel = 0.0;   ///< max of the entrywise relative error (informational)
  double constant = 0.0;        ///< max_abs_error / (h^2 + exp(-m L))
  double center_value = 0.0;    ///< discrete G at the node nearest 0, diagonal
  double decay_ratio = 0.0;     ///< discrete G(x0, x5) / G(x0, x0), nodes nearest 0 and 5
  double decay_expected = 0.0;  ///< exp(-m |x5 - x0|)
  double symmetry_defect = 0.0;
  double window = 0.0;          ///< |x|, |y| <= window
};

/// V = 0 only. Compares on the interior window |x|, |y| <= L/2.
GreensCheck greens_check(const Grid1D& grid, double m);

struct PositivityEquivalence {
  bool Acal_nonneg = false;
  bool HV_nonneg = false;
  bool HnuV_nonneg = false;
  bool equivalent = false;
  Inertia kappa_Acal;
  Inertia kappa_HV;
  Inertia kappa_HnuV;
};

/// Throws DegenerateInertia when any of the three operators has an eigenvalue in [-tol, tol].
PositivityEquivalence positivity_equivalence(const Grid1D& grid, double m, double nu, const Potential& v,
                                             double tol);

struct GLReportOptions {
  std::vector<double> y_grid{0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0};
  double band_tol = 2e-2;
  double inertia_tol = 1e-10;
  double real_tol = 1e-8;
  double artifact_mass = 0.5;         ///< eigenvector mass in the outer 10% that flags an artifact
  std::size_t t_route_points = 6;     ///< smallest-|lambda| eigenvalues checked through T
  bool full_via_T = false;            ///< grid search for det T = 0; costly beyond a few hundred unknowns
  Region region{-3.0, 3.0, -1.0, 1.0};
  ViaTOptions via_T;
  LrgOptions lrg;
};

struct GLSpectrumReport {
  SpectralReport report;
  BandSet ess_bands;
  LSymbolSpectrum symbol_spectrum;
  std::optional<KappaDecomposition> kappa;
  std::string kappa_error;
  TNecessaryTable t_table;
  double min_abs_re = 0.0;
  double max_abs_im = 0.0;
  std::vector<bool> boundary_artifact;
  std::size_t artifact_count = 0;
  std::vector<std::pair<cplx, double>> t_route;  ///< (lambda, sigma_min(T(lambda)) / sv_zero_tol)
  double gap_point_smin = 0.0;                   ///< sigma_min(T(0)), nonzero inside the gap
  std::optional<ViaTResult> via_T;
};

GLSpectrumReport gl_spectrum_report(const GLDiscretization& d, const GLReportOptions& opts = {});

}  // namespace blockspec
