#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace blockspec {

using cplx = std::complex<double>;

/// Dense complex matrix, row-major. Stands in for the (possibly unbounded)
/// operators of the block-matrix theory once they are truncated to finite size.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols);
  /// Takes ownership of `entries`; throws DimensionMismatch if the count is
  /// wrong and NonFinite on NaN/Inf.
  CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);

  static CMatrix identity(std::size_t n);
  static CMatrix diagonal(std::span<const double> d);
  static CMatrix diagonal(std::span<const cplx> d);
  static CMatrix from_rows(std::initializer_list<std::initializer_list<cplx>> rows);
  /// [[a, b], [c, d]] with square blocks of equal size.
  static CMatrix block2x2(const CMatrix& a, const CMatrix& b, const CMatrix& c,
                          const CMatrix& d);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<cplx> data() noexcept { return data_; }
  std::span<const cplx> data() const noexcept { return data_; }

  CMatrix adjoint() const;
  CMatrix transpose() const;
  CMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const CMatrix& m);
  std::vector<cplx> column(std::size_t j) const;
  std::vector<cplx> diagonal_entries() const;

  double frobenius_norm() const;
  double max_abs() const;
  bool all_finite() const;
  /// max |M_ij - conj(M_ji)|; zero for exactly Hermitian input.
  double hermitian_defect() const;

  CMatrix& operator+=(const CMatrix& rhs);
  CMatrix& operator-=(const CMatrix& rhs);
  CMatrix& operator*=(cplx s);

  friend bool operator==(const CMatrix&, const CMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

CMatrix operator+(CMatrix lhs, const CMatrix& rhs);
CMatrix operator-(CMatrix lhs, const CMatrix& rhs);
CMatrix operator-(CMatrix m);
CMatrix operator*(cplx s, CMatrix m);
/// Matrix product through BLAS zgemm.
CMatrix operator*(const CMatrix& lhs, const CMatrix& rhs);
std::vector<cplx> operator*(const CMatrix& m, std::span<const cplx> v);

/// M - z I.
CMatrix shifted(CMatrix m, cplx z);
/// M + s I.
CMatrix add_identity(CMatrix m, cplx s);

double norm2(std::span<const cplx> v);

}  // namespace blockspec
