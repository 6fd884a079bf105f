#include "blockspec/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "blockspec/error.hpp"
#include "blockspec/linalg.hpp"

namespace blockspec {

Poly::Poly(std::vector<cplx> coeffs) : c_(std::move(coeffs)) {
  for (const cplx v : c_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw Error(ErrorKind::non_finite, "polynomial coefficient is not finite");
    }
  }
  trim();
}

void Poly::trim() {
  double scale = 0.0;
  for (const cplx v : c_) scale = std::max(scale, std::abs(v));
  while (!c_.empty() && std::abs(c_.back()) <= 1e-13 * scale) c_.pop_back();
}

cplx Poly::operator()(cplx x) const {
  cplx acc{};
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double Poly::magnitude(double x) const {
  double acc = 0.0;
  const double ax = std::abs(x);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * ax + std::abs(*it);
  return acc;
}

Poly Poly::conj() const {
  std::vector<cplx> c(c_.size());
  std::transform(c_.begin(), c_.end(), c.begin(), [](cplx v) { return std::conj(v); });
  return Poly(std::move(c));
}

std::vector<double> Poly::real_roots(double rel_tol) const {
  std::vector<double> out;
  const std::size_t d = degree();
  if (is_zero() || d == 0) return out;
  CMatrix comp(d, d);
  for (std::size_t k = 0; k < d; ++k) comp(0, k) = -c_[d - 1 - k] / c_[d];
  for (std::size_t k = 1; k < d; ++k) comp(k, k - 1) = 1.0;
  for (const cplx r : eigenvalues(comp)) {
    if (std::abs(r.imag()) > rel_tol * (1.0 + std::abs(r))) continue;
    const double x = r.real();
    if (std::abs((*this)(x)) > rel_tol * magnitude(x)) continue;
    out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Poly operator+(const Poly& p, const Poly& q) {
  std::vector<cplx> c(std::max(p.c_.size(), q.c_.size()));
  for (std::size_t k = 0; k < p.c_.size(); ++k) c[k] += p.c_[k];
  for (std::size_t k = 0; k < q.c_.size(); ++k) c[k] += q.c_[k];
  return Poly(std::move(c));
}

Poly operator-(const Poly& p, const Poly& q) { return p + cplx{-1.0, 0.0} * q; }

Poly operator*(const Poly& p, const Poly& q) {
  if (p.is_zero() || q.is_zero()) return Poly();
  std::vector<cplx> c(p.c_.size() + q.c_.size() - 1);
  for (std::size_t i = 0; i < p.c_.size(); ++i) {
    for (std::size_t j = 0; j < q.c_.size(); ++j) c[i + j] += p.c_[i] * q.c_[j];
  }
  return Poly(std::move(c));
}

Poly operator*(cplx s, const Poly& p) {
  std::vector<cplx> c(p.c_);
  for (auto& v : c) v *= s;
  return Poly(std::move(c));
}

Rational operator+(const Rational& p, const Rational& q) {
  return {p.num * q.den + q.num * p.den, p.den * q.den};
}

Rational operator-(const Rational& p, const Rational& q) {
  return {p.num * q.den - q.num * p.den, p.den * q.den};
}

Rational operator*(const Rational& p, const Rational& q) { return {p.num * q.num, p.den * q.den}; }

Rational operator/(const Rational& p, const Rational& q) {
  if (q.num.is_zero()) throw Error(ErrorKind::invalid_argument, "division by the zero rational function");
  return {p.num * q.den, p.den * q.num};
}

double tail_limit(const Poly& p, const Poly& q) {
  if (q.is_zero()) throw Error(ErrorKind::invalid_argument, "tail limit with zero denominator");
  if (p.is_zero()) return 0.0;
  if (p.degree() > q.degree()) return std::numeric_limits<double>::infinity();
  if (p.degree() < q.degree()) return 0.0;
  return std::abs(p.leading()) / std::abs(q.leading());
}

}  // namespace blockspec
