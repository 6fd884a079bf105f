#include "blockspec/linalg.hpp"

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "blockspec/error.hpp"

namespace blockspec {

namespace {

lapack_int as_int(std::size_t n) { return static_cast<lapack_int>(n); }

void require_square(const CMatrix& m, const char* what) {
  if (!m.is_square()) throw Error(ErrorKind::dimension_mismatch, std::string(what) + " needs a square matrix");
}

void require_finite(const CMatrix& m) {
  if (!m.all_finite()) throw Error(ErrorKind::non_finite, "matrix has NaN or Inf entries");
}

void check_info(lapack_int info, const char* routine) {
  if (info < 0) {
    throw Error(ErrorKind::invalid_argument,
                std::string(routine) + ": illegal argument " + std::to_string(-info));
  }
  if (info > 0) {
    throw Error(ErrorKind::convergence_failure,
                std::string(routine) + " failed to converge (info=" + std::to_string(info) + ")");
  }
}

double one_norm(const CMatrix& m) {
  double best = 0.0;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) s += std::abs(m(i, j));
    best = std::max(best, s);
  }
  return best;
}

}  // namespace

void require_hermitian(const CMatrix& m, ErrorKind kind) {
  require_square(m, "Hermitian check");
  const double defect = m.hermitian_defect();
  const double scale = m.frobenius_norm();
  if (defect > LinalgTolerances::hermitian_rel * scale) {
    throw Error(kind, "asymmetry " + std::to_string(defect) + " exceeds tolerance for norm " +
                          std::to_string(scale));
  }
}

HermitianEig hermitian_eig(const CMatrix& m) {
  require_hermitian(m);
  require_finite(m);
  const std::size_t n = m.rows();
  HermitianEig out;
  out.values.resize(n);
  out.vectors = m;
  if (n == 0) return out;
  check_info(LAPACKE_zheevd(LAPACK_ROW_MAJOR, 'V', 'U', as_int(n), out.vectors.data().data(),
                            as_int(n), out.values.data()),
             "zheevd");
  return out;
}

std::vector<double> hermitian_eigenvalues(const CMatrix& m) {
  require_hermitian(m);
  require_finite(m);
  const std::size_t n = m.rows();
  std::vector<double> w(n);
  if (n == 0) return w;
  CMatrix work = m;
  check_info(LAPACKE_zheevd(LAPACK_ROW_MAJOR, 'N', 'U', as_int(n), work.data().data(), as_int(n),
                            w.data()),
             "zheevd");
  return w;
}

GeneralEig general_eig(const CMatrix& m, bool with_vectors, bool with_condition) {
  require_square(m, "general_eig");
  require_finite(m);
  const std::size_t n = m.rows();
  GeneralEig out;
  out.values.resize(n);
  if (n == 0) return out;
  CMatrix work = m;
  CMatrix vr = with_vectors ? CMatrix(n, n) : CMatrix(1, n);
  // The row-major wrapper checks both vector leading dimensions against n
  // even when the vectors are not requested.
  std::vector<cplx> vl(n);
  check_info(LAPACKE_zgeev(LAPACK_ROW_MAJOR, 'N', with_vectors ? 'V' : 'N', as_int(n),
                           work.data().data(), as_int(n), out.values.data(), vl.data(), as_int(n),
                           vr.data().data(), as_int(n)),
             "zgeev");
  if (!with_vectors) return out;

  const double mnorm = m.frobenius_norm();
  const CMatrix mv = m * vr;
  out.residuals.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    double r = 0.0;
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      r += std::norm(mv(i, j) - out.values[j] * vr(i, j));
      v += std::norm(vr(i, j));
    }
    const double denom = std::max(mnorm, std::numeric_limits<double>::min()) * std::sqrt(v);
    out.residuals[j] = std::sqrt(r) / denom;
  }
  if (with_condition) {
    const auto s = singular_values(vr);
    out.vector_condition = s.back() > 0.0 ? s.front() / s.back() : INFINITY;
    out.defective = out.vector_condition > 1.0 / std::sqrt(std::numeric_limits<double>::epsilon());
  }
  out.vectors = std::move(vr);
  return out;
}

std::vector<cplx> eigenvalues(const CMatrix& m) { return general_eig(m, false).values; }

std::vector<double> singular_values(const CMatrix& m) {
  require_finite(m);
  const std::size_t k = std::min(m.rows(), m.cols());
  std::vector<double> s(k);
  if (k == 0) return s;
  CMatrix work = m;
  const std::size_t ld = std::max(m.rows(), m.cols());
  std::vector<cplx> du(ld);
  std::vector<cplx> dvt(ld);
  check_info(LAPACKE_zgesdd(LAPACK_ROW_MAJOR, 'N', as_int(m.rows()), as_int(m.cols()),
                            work.data().data(), as_int(m.cols()), s.data(), du.data(), as_int(ld),
                            dvt.data(), as_int(ld)),
             "zgesdd");
  return s;
}

double spectral_norm(const CMatrix& m) {
  if (m.empty()) return 0.0;
  return singular_values(m).front();
}

double min_singular_value(const CMatrix& m) {
  if (m.empty()) return 0.0;
  return singular_values(m).back();
}

LuFactor::LuFactor(CMatrix m) : lu_(std::move(m)) {
  require_square(lu_, "LU factorization");
  require_finite(lu_);
  const std::size_t n = lu_.rows();
  pivots_.resize(n);
  if (n == 0) {
    rcond_ = 1.0;
    return;
  }
  const double anorm = one_norm(lu_);
  const lapack_int info =
      LAPACKE_zgetrf(LAPACK_ROW_MAJOR, as_int(n), as_int(n), lu_.data().data(), as_int(n), pivots_.data());
  if (info < 0) check_info(info, "zgetrf");
  if (info > 0 || anorm == 0.0) {
    exactly_singular_ = true;
    rcond_ = 0.0;
    return;
  }
  // LAPACKE transposes row-major input, so the factors are those of A itself
  // and the 1-norm taken before factoring is the one zgecon expects.
  double rc = 0.0;
  check_info(LAPACKE_zgecon(LAPACK_ROW_MAJOR, '1', as_int(n), lu_.data().data(), as_int(n), anorm, &rc),
             "zgecon");
  rcond_ = rc;
}

CMatrix LuFactor::solve(const CMatrix& rhs) const {
  if (rhs.rows() != lu_.rows()) throw Error(ErrorKind::dimension_mismatch, "LU solve: rhs rows");
  if (exactly_singular_) throw Error(ErrorKind::singular_matrix, "matrix is exactly singular");
  CMatrix x = rhs;
  if (x.empty()) return x;
  check_info(LAPACKE_zgetrs(LAPACK_ROW_MAJOR, 'N', as_int(lu_.rows()), as_int(x.cols()),
                            lu_.data().data(), as_int(lu_.rows()), pivots_.data(), x.data().data(),
                            as_int(x.cols())),
             "zgetrs");
  return x;
}

CMatrix LuFactor::inverse() const { return solve(CMatrix::identity(lu_.rows())); }

cplx LuFactor::determinant() const {
  if (exactly_singular_) return {0.0, 0.0};
  cplx det{1.0, 0.0};
  for (std::size_t i = 0; i < lu_.rows(); ++i) {
    det *= lu_(i, i);
    if (pivots_[i] != static_cast<int>(i + 1)) det = -det;
  }
  return det;
}

SolveResult solve(const CMatrix& m, const CMatrix& rhs) {
  LuFactor lu(m);
  if (lu.below_floor()) {
    throw Error(ErrorKind::singular_matrix,
                "reciprocal condition " + std::to_string(lu.rcond()) + " below floor");
  }
  return {lu.solve(rhs), lu.rcond()};
}

CMatrix inverse(const CMatrix& m) { return solve(m, CMatrix::identity(m.rows())).x; }

cplx determinant(const CMatrix& m) { return LuFactor(m).determinant(); }

Inertia inertia_from_eigenvalues(std::span<const double> values, double tol) {
  Inertia in;
  in.tol = tol;
  for (double v : values) {
    if (v < -tol) {
      ++in.n_neg;
    } else if (v > tol) {
      ++in.n_pos;
    } else {
      ++in.n_zero;
    }
  }
  return in;
}

Inertia inertia(const CMatrix& m, double tol) {
  if (tol < 0.0) throw Error(ErrorKind::invalid_argument, "inertia tolerance must be >= 0");
  const auto w = hermitian_eigenvalues(m);
  return inertia_from_eigenvalues(w, tol);
}

}  // namespace blockspec
