#pragma once

#include <span>
#include <vector>

#include "blockspec/cmatrix.hpp"

namespace blockspec {

/// Complex-coefficient polynomial in a real variable, coefficients ascending.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<cplx> coeffs);
  static Poly constant(cplx c) { return Poly({c}); }
  /// 0 for the zero polynomial, which is stored with no coefficients.
  std::size_t degree() const noexcept { return c_.empty() ? 0 : c_.size() - 1; }
  bool is_zero() const noexcept { return c_.empty(); }
  std::span<const cplx> coeffs() const noexcept { return c_; }
  cplx leading() const noexcept { return c_.empty() ? cplx{} : c_.back(); }

  cplx operator()(cplx x) const;
  /// Sum |c_k| |x|^k, the natural scale for rounding errors in p(x).
  double magnitude(double x) const;
  /// Coefficients conjugated: p*(x) = conj(p(x)) for real x.
  Poly conj() const;
  /// Real zeros, found from companion-matrix eigenvalues with |Im| <= rel_tol (1 + |root|)
  /// and |p(root)| <= rel_tol * magnitude(root).
  std::vector<double> real_roots(double rel_tol = 1e-8) const;

  friend Poly operator+(const Poly& p, const Poly& q);
  friend Poly operator-(const Poly& p, const Poly& q);
  friend Poly operator*(const Poly& p, const Poly& q);
  friend Poly operator*(cplx s, const Poly& p);

 private:
  void trim();
  std::vector<cplx> c_;
};

/// num / den.
struct Rational {
  Poly num;
  Poly den = Poly::constant(1.0);

  Rational() = default;
  Rational(Poly n) : num(std::move(n)) {}  // NOLINT(google-explicit-constructor)
  Rational(Poly n, Poly d) : num(std::move(n)), den(std::move(d)) {}

  cplx operator()(double x) const { return num(x) / den(x); }
  Rational conj() const { return {num.conj(), den.conj()}; }

  friend Rational operator+(const Rational& p, const Rational& q);
  friend Rational operator-(const Rational& p, const Rational& q);
  friend Rational operator*(const Rational& p, const Rational& q);
  friend Rational operator/(const Rational& p, const Rational& q);
};

/// lim |p/q| as x -> +-infinity (identical for both ends).
double tail_limit(const Poly& p, const Poly& q);

}  // namespace blockspec
