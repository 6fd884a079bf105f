#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "blockspec/cmatrix.hpp"
#include "blockspec/error.hpp"

namespace blockspec {

/// Tolerances shared by the dense kernel. Sized for double precision and
/// matrices up to a few thousand rows.
struct LinalgTolerances {
  static constexpr double hermitian_rel = 1e-10;  ///< relative to ||M||_F
  static constexpr double eig_residual = 1e-9;
  static constexpr double solve_residual = 1e-9;
  static constexpr double rcond_floor = 1e-13;
};

/// Negative / zero / positive eigenvalue counts of a Hermitian matrix.
/// `n_neg` is the negative index kappa_-.
struct Inertia {
  std::size_t n_neg = 0;
  std::size_t n_zero = 0;
  std::size_t n_pos = 0;
  double tol = 0.0;

  std::size_t dimension() const noexcept { return n_neg + n_zero + n_pos; }
  friend bool operator==(const Inertia&, const Inertia&) = default;
};

struct HermitianEig {
  std::vector<double> values;  ///< ascending
  CMatrix vectors;             ///< columns are orthonormal eigenvectors
};

struct GeneralEig {
  std::vector<cplx> values;
  CMatrix vectors;                ///< right eigenvectors (unit columns); empty if not requested
  std::vector<double> residuals;  ///< ||Mv - lambda v|| / (||M|| ||v||), empty without vectors
  double vector_condition = 0.0;  ///< cond_2 of the eigenvector matrix, 0 if not computed
  bool defective = false;         ///< vector_condition above 1/sqrt(eps)
};

/// Throws NotHermitian (or `kind`) when the asymmetry exceeds hermitian_rel * ||M||_F.
void require_hermitian(const CMatrix& m, ErrorKind kind = ErrorKind::not_hermitian);

HermitianEig hermitian_eig(const CMatrix& m);
std::vector<double> hermitian_eigenvalues(const CMatrix& m);

GeneralEig general_eig(const CMatrix& m, bool with_vectors = true, bool with_condition = false);
std::vector<cplx> eigenvalues(const CMatrix& m);

/// Descending singular values.
std::vector<double> singular_values(const CMatrix& m);
double spectral_norm(const CMatrix& m);
double min_singular_value(const CMatrix& m);

/// LU factorization with partial pivoting; keeps the 1-norm reciprocal
/// condition estimate around so callers can decide whether to trust solves.
class LuFactor {
 public:
  explicit LuFactor(CMatrix m);

  std::size_t dimension() const noexcept { return lu_.rows(); }
  double rcond() const noexcept { return rcond_; }
  bool exactly_singular() const noexcept { return exactly_singular_; }
  bool below_floor(double floor = LinalgTolerances::rcond_floor) const noexcept {
    return exactly_singular_ || rcond_ < floor;
  }
  CMatrix solve(const CMatrix& rhs) const;
  CMatrix inverse() const;
  cplx determinant() const;

 private:
  CMatrix lu_;
  std::vector<int> pivots_;
  double rcond_ = 0.0;
  bool exactly_singular_ = false;
};

struct SolveResult {
  CMatrix x;
  double rcond = 0.0;
};

/// Throws SingularMatrix when rcond < rcond_floor.
SolveResult solve(const CMatrix& m, const CMatrix& rhs);
CMatrix inverse(const CMatrix& m);
cplx determinant(const CMatrix& m);

Inertia inertia(const CMatrix& m, double tol);
Inertia inertia_from_eigenvalues(std::span<const double> values, double tol);

}  // namespace blockspec
