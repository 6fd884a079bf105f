#pragma once

// Finite block operators [[A, C*], [C, B]] and L = J [[A, C*], [C, B]]
// = [[iC, iB], [-iA, -iC*]], with J = [[0, iI], [-iI, 0]].

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "blockspec/cmatrix.hpp"
#include "blockspec/error.hpp"
#include "blockspec/linalg.hpp"

namespace blockspec {

struct BlockCoefficients {
  CMatrix A;
  CMatrix B;
  CMatrix C;
  std::string label;

  std::size_t n() const noexcept { return A.rows(); }
};

struct BlockValidity {
  double rcond_A = 0.0;
  Inertia kappa_A;
  /// Conditions that hold automatically for matrices and are therefore not tested.
  std::vector<std::string> vacuous;
};

/// Throws DimensionMismatch, NonFinite, NonHermitianA, NonHermitianB or SingularA.
BlockValidity validate(const BlockCoefficients& c);

/// J for block size n.
CMatrix fundamental_symmetry(std::size_t n);
/// max(||J - J*||, ||J J - I||), entrywise.
double fundamental_symmetry_defect(std::size_t n);

CMatrix assemble_selfadjoint(const BlockCoefficients& c);
CMatrix assemble_jsa(const BlockCoefficients& c);

/// B - C (A - z)^{-1} C*. Throws ZInSpectrumA when A - z is numerically singular.
CMatrix schur_S(const BlockCoefficients& c, cplx z);

/// T(z) = P0 + z P1 + z^2 P2.
struct TPencil {
  CMatrix P0;  ///< B - C A^{-1} C*
  CMatrix P1;  ///< i (C A^{-1} - A^{-1} C*)
  CMatrix P2;  ///< -A^{-1}

  CMatrix eval(cplx z) const;
  CMatrix derivative(cplx z) const;
};

TPencil make_T_pencil(const BlockCoefficients& c);

/// B - (C + iz) A^{-1} (C* - iz). Throws SingularA.
CMatrix schur_T(const BlockCoefficients& c, cplx z);

struct SchurEval {
  cplx z;
  CMatrix S_of_z;
  CMatrix T_of_z;
  double rcond_S = 0.0;
  double rcond_T = 0.0;
};

SchurEval schur_eval(const BlockCoefficients& c, cplx z);

struct FactorizationResidual {
  double selfadjoint = 0.0;  ///< relative residual of the factorization of [[A, C*], [C, B]] - z
  double jsa = 0.0;          ///< relative residual of the factorization of L - z through T(z)
  double max() const noexcept { return selfadjoint > jsa ? selfadjoint : jsa; }
};

FactorizationResidual frobenius_schur_residuals(const BlockCoefficients& c, cplx z);
double frobenius_schur_check(const BlockCoefficients& c, cplx z);

struct KappaDecomposition {
  Inertia kappa_Acal;
  Inertia kappa_A;
  Inertia kappa_S0;
  bool consistent = false;
};

/// Throws DegenerateInertia if any of the three matrices has an eigenvalue in [-tol, tol].
KappaDecomposition kappa_decomposition(const BlockCoefficients& c, double tol);

struct LSpectrum {
  std::vector<cplx> values;
  CMatrix vectors;
  std::vector<double> residuals;
  double vector_condition = 0.0;
  bool defective = false;
};

LSpectrum spectrum_L_direct(const BlockCoefficients& c, bool with_condition = false);

struct Region {
  double re_lo = -1.0;
  double re_hi = 1.0;
  double im_lo = -1.0;
  double im_hi = 1.0;

  bool contains(cplx z) const noexcept {
    return z.real() >= re_lo && z.real() <= re_hi && z.imag() >= im_lo && z.imag() <= im_hi;
  }
};

struct ViaTOptions {
  std::size_t grid_re = 200;
  std::size_t grid_im = 200;
  int newton_max_iter = 60;
  unsigned threads = 1;
};

struct ViaTResult {
  std::vector<cplx> roots;  ///< inside the region, with multiplicity
  std::size_t roots_total = 0;
  std::size_t seeds_tried = 0;
  bool no_roots_in_region = false;
};

/// 1e-8 (||B|| + (||C|| + |z|)^2 ||A^{-1}||).
double sv_zero_tol(const BlockCoefficients& c, cplx z);

ViaTResult spectrum_L_via_T(const BlockCoefficients& c, const Region& region,
                            const ViaTOptions& opts = {});

/// Hausdorff distance between two finite point sets; 0 when both are empty,
/// infinity when exactly one is.
double hausdorff_distance(std::span<const cplx> a, std::span<const cplx> b);

struct SymmetryCheck {
  bool symmetric = true;
  std::vector<std::pair<cplx, cplx>> pairs;
  std::vector<cplx> unmatched;
};

/// Points with |Im| <= pair_tol * max(1, |lambda|) count as real.
SymmetryCheck spectral_symmetry_check(std::span<const cplx> eigs, double pair_tol = 1e-8);

struct NonrealBound {
  std::size_t nonreal = 0;
  std::size_t bound = 0;
  bool ok = false;
};

NonrealBound nonreal_count_bound(const BlockCoefficients& c, double tol);

enum class LrgVerdict { consistent_on_grid, violated, inconclusive };

std::string_view to_string(LrgVerdict v) noexcept;

struct LrgOptions {
  double K_report = 10.0;
  double growth_factor = 5.0;
  unsigned threads = 1;
};

struct LrgPoint {
  double y = 0.0;
  double norm = 0.0;
  double product = 0.0;
};

struct LrgScan {
  std::vector<LrgPoint> points;  ///< sorted by y
  LrgVerdict verdict = LrgVerdict::inconclusive;
  double sup_product = 0.0;
  /// Largest product(y2) / product(y1) with y2 >= 10 y1 over monotone stretches.
  double max_decade_growth = 0.0;
  double K_report = 0.0;
  double growth_factor = 0.0;
};

/// y ||(L - iy)^{-1}|| on the grid. Throws ResolventSingular.
LrgScan lrg_scan(const BlockCoefficients& c, std::span<const double> y_grid,
                 const LrgOptions& opts = {});
LrgScan lrg_scan_matrix(const CMatrix& op, std::span<const double> y_grid,
                        const LrgOptions& opts = {});

struct TNecessaryRow {
  cplx z;
  double t_inv_norm = 0.0;
  double a_inv_t_inv_norm = 0.0;
  double bound_t = 0.0;    ///< ||T(z)^{-1}|| |Im z|
  double bound_at = 0.0;   ///< ||A^{-1} T(z)^{-1}|| |z| |Im z|
};

struct TNecessaryTable {
  std::vector<TNecessaryRow> rows;
  double K_observed = 0.0;  ///< max of both bounds over the grid
  bool below_K = false;     ///< K_observed <= K_report
  double K_report = 0.0;
};

/// Throws TSingular at a grid point where T(z) is numerically singular and
/// InvalidArgument for real z.
TNecessaryTable lrg_necessary_T(const BlockCoefficients& c, std::span<const cplx> z_grid,
                                double K_report = 10.0);

struct DetRatioCheck {
  std::vector<cplx> ratios;  ///< det(L - z) / ((-1)^n det T(z) det A)
  double max_deviation = 0.0;  ///< max |ratio - ratios[0]| / |ratios[0]|
};

DetRatioCheck det_ratio_check(const BlockCoefficients& c, std::span<const cplx> zs);

struct SpectralReport {
  std::vector<cplx> eigenvalues_L;
  std::vector<double> residuals_L;
  CMatrix eigenvectors_L;  ///< unit columns; not serialized
  std::vector<double> eigenvalues_A_cal;
  Inertia kappa_A;
  Inertia kappa_S0;
  Inertia kappa_Acal;
  std::vector<std::pair<cplx, cplx>> nonreal_pairs;
  LrgScan lrg;
  std::map<std::string, bool> verdicts;
  /// Operation name and tolerance behind each verdict.
  std::map<std::string, std::pair<std::string, double>> verdict_sources;
  bool truncation = true;
};

struct SpectralReportOptions {
  double inertia_tol = 1e-10;
  double pair_tol = 1e-8;
  double real_tol = 1e-8;
  LrgOptions lrg;
};

/// Direct spectrum, inertia triple, conjugate pairing and LRG scan in one record.
SpectralReport spectral_report(const BlockCoefficients& c, std::span<const double> y_grid,
                               const SpectralReportOptions& opts = {});

}  // namespace blockspec
