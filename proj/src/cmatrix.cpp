#include "blockspec/cmatrix.hpp"

#include <cblas.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "blockspec/error.hpp"

namespace blockspec {

namespace {

void require_same_shape(const CMatrix& a, const CMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::dimension_mismatch,
                std::string(op) + ": " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                    " vs " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
}

}  // namespace

CMatrix::CMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    throw Error(ErrorKind::dimension_mismatch,
                "expected " + std::to_string(rows_ * cols_) + " entries, got " +
                    std::to_string(data_.size()));
  }
  if (!all_finite()) throw Error(ErrorKind::non_finite, "matrix entries must be finite");
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::diagonal(std::span<const double> d) {
  CMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

CMatrix CMatrix::diagonal(std::span<const cplx> d) {
  CMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

CMatrix CMatrix::from_rows(std::initializer_list<std::initializer_list<cplx>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<cplx> entries;
  entries.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw Error(ErrorKind::dimension_mismatch, "ragged row list");
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return CMatrix(r, c, std::move(entries));
}

CMatrix CMatrix::block2x2(const CMatrix& a, const CMatrix& b, const CMatrix& c,
                          const CMatrix& d) {
  const std::size_t n = a.rows();
  for (const CMatrix* m : {&a, &b, &c, &d}) {
    if (m->rows() != n || m->cols() != n) {
      throw Error(ErrorKind::dimension_mismatch, "block2x2 needs four n x n blocks");
    }
  }
  CMatrix out(2 * n, 2 * n);
  out.set_block(0, 0, a);
  out.set_block(0, n, b);
  out.set_block(n, 0, c);
  out.set_block(n, n, d);
  return out;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

CMatrix CMatrix::transpose() const {
  CMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

CMatrix CMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) {
    throw Error(ErrorKind::dimension_mismatch, "block out of range");
  }
  CMatrix out(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    std::copy_n(&data_[(r0 + i) * cols_ + c0], nc, &out.data_[i * nc]);
  return out;
}

void CMatrix::set_block(std::size_t r0, std::size_t c0, const CMatrix& m) {
  if (r0 + m.rows_ > rows_ || c0 + m.cols_ > cols_) {
    throw Error(ErrorKind::dimension_mismatch, "set_block out of range");
  }
  for (std::size_t i = 0; i < m.rows_; ++i)
    std::copy_n(&m.data_[i * m.cols_], m.cols_, &data_[(r0 + i) * cols_ + c0]);
}

std::vector<cplx> CMatrix::column(std::size_t j) const {
  std::vector<cplx> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

std::vector<cplx> CMatrix::diagonal_entries() const {
  std::vector<cplx> out(std::min(rows_, cols_));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (*this)(i, i);
  return out;
}

double CMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const cplx& v : data_) s += std::norm(v);
  return std::sqrt(s);
}

double CMatrix::max_abs() const {
  double m = 0.0;
  for (const cplx& v : data_) m = std::max(m, std::abs(v));
  return m;
}

bool CMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](const cplx& v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  });
}

double CMatrix::hermitian_defect() const {
  if (!is_square()) return INFINITY;
  double d = 0.0;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i; j < cols_; ++j)
      d = std::max(d, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  return d;
}

CMatrix& CMatrix::operator+=(const CMatrix& rhs) {
  require_same_shape(*this, rhs, "operator+=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& rhs) {
  require_same_shape(*this, rhs, "operator-=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
  return *this;
}

CMatrix& CMatrix::operator*=(cplx s) {
  for (cplx& v : data_) v *= s;
  return *this;
}

CMatrix operator+(CMatrix lhs, const CMatrix& rhs) { return lhs += rhs; }
CMatrix operator-(CMatrix lhs, const CMatrix& rhs) { return lhs -= rhs; }
CMatrix operator-(CMatrix m) { return m *= -1.0; }
CMatrix operator*(cplx s, CMatrix m) { return m *= s; }

CMatrix operator*(const CMatrix& lhs, const CMatrix& rhs) {
  if (lhs.cols() != rhs.rows()) {
    throw Error(ErrorKind::dimension_mismatch, "matrix product: inner dimensions differ");
  }
  CMatrix out(lhs.rows(), rhs.cols());
  if (out.empty() || lhs.cols() == 0) return out;
  const cplx one{1.0, 0.0};
  const cplx zero{0.0, 0.0};
  cblas_zgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, static_cast<int>(lhs.rows()),
              static_cast<int>(rhs.cols()), static_cast<int>(lhs.cols()), &one,
              lhs.data().data(), static_cast<int>(lhs.cols()), rhs.data().data(),
              static_cast<int>(rhs.cols()), &zero, out.data().data(),
              static_cast<int>(out.cols()));
  return out;
}

std::vector<cplx> operator*(const CMatrix& m, std::span<const cplx> v) {
  if (m.cols() != v.size()) throw Error(ErrorKind::dimension_mismatch, "matrix-vector product");
  std::vector<cplx> out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    cplx s{0.0, 0.0};
    for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

CMatrix shifted(CMatrix m, cplx z) { return add_identity(std::move(m), -z); }

CMatrix add_identity(CMatrix m, cplx s) {
  if (!m.is_square()) throw Error(ErrorKind::dimension_mismatch, "shift of non-square matrix");
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) += s;
  return m;
}

double norm2(std::span<const cplx> v) {
  double s = 0.0;
  for (const cplx& x : v) s += std::norm(x);
  return std::sqrt(s);
}

}  // namespace blockspec
