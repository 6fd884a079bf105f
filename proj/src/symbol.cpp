#include "blockspec/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "blockspec/error.hpp"
#include "blockspec/simd/kernels.hpp"

namespace blockspec {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kInf = std::numeric_limits<double>::infinity();

struct SplitArrays {
  std::vector<double> re;
  std::vector<double> im;
};

SplitArrays eval_poly(const Poly& p, std::span<const double> x) {
  SplitArrays out{std::vector<double>(x.size()), std::vector<double>(x.size())};
  if (p.is_zero() || x.empty()) return out;
  std::vector<double> cr;
  std::vector<double> ci;
  for (const cplx v : p.coeffs()) {
    cr.push_back(v.real());
    ci.push_back(v.imag());
  }
  simd::kernels().poly_eval(cr.data(), ci.data(), cr.size(), x.data(), x.size(), out.re.data(),
                            out.im.data());
  return out;
}

// sup over the grid of |P/Q| plus the tail limit and real poles of Q.
SupResult sup_of_rational(const Poly& P, const Poly& Q, std::span<const double> grid) {
  SupResult r;
  const auto pv = eval_poly(P, grid);
  const auto qv = eval_poly(Q, grid);
  const auto m = simd::kernels().abs_ratio_max(pv.re.data(), pv.im.data(), qv.re.data(), qv.im.data(),
                                               grid.size(), kNearZeroAbs);
  r.grid_sup = m.value;
  r.grid_arg = grid.empty() ? 0.0 : grid[m.index];
  r.near_zero = m.near_zero;
  r.tail_limit = tail_limit(P, Q);
  for (double x : Q.real_roots()) {
    if (std::abs(P(x)) > 1e-8 * std::max(P.magnitude(x), 1e-300)) {
      r.pole = true;
      r.pole_locations.push_back(x);
    }
  }
  r.value = r.pole ? kInf : std::max(r.grid_sup, r.tail_limit);
  return r;
}

// Sampled symbols: values at grid points inside the sample range and at the samples.
std::vector<double> sampled_abscissae(const SymbolTriple& s, std::span<const double> grid) {
  std::vector<double> x(s.grid.begin(), s.grid.end());
  for (double l : grid) {
    if (s.in_domain(l)) x.push_back(l);
  }
  std::sort(x.begin(), x.end());
  x.erase(std::unique(x.begin(), x.end()), x.end());
  return x;
}

// d = ab - (c + sign*iz)(c* - sign*iz) as a rational function.
Rational denominator(const SymbolTriple& s, cplx z, double sign) {
  const Rational shift(Poly::constant(sign * kI * z));
  return s.a * s.b - (s.c + shift) * (s.c.conj() - shift);
}

SupResult sup_a_over_d(const SymbolTriple& s, cplx z, double sign, std::span<const double> grid) {
  if (s.kind == SymbolTriple::Kind::closed_form) {
    const Rational d = denominator(s, z, sign);
    return sup_of_rational(s.a.num * d.den, s.a.den * d.num, grid);
  }
  const auto x = sampled_abscissae(s, grid);
  const std::size_t n = x.size();
  std::vector<double> ar(n), ai(n), br(n), bi(n), cr(n), ci(n), dr(n), di(n);
  for (std::size_t k = 0; k < n; ++k) {
    const cplx a = s.a_at(x[k]);
    const cplx b = s.b_at(x[k]);
    const cplx c = s.c_at(x[k]);
    ar[k] = a.real();
    ai[k] = a.imag();
    br[k] = b.real();
    bi[k] = b.imag();
    cr[k] = c.real();
    ci[k] = c.imag();
  }
  const auto& kt = simd::kernels();
  kt.symbol_denominator(ar.data(), ai.data(), br.data(), bi.data(), cr.data(), ci.data(), n, z.real(),
                        z.imag(), sign, dr.data(), di.data());
  const auto m = kt.abs_ratio_max(ar.data(), ai.data(), dr.data(), di.data(), n, kNearZeroAbs);
  SupResult r;
  r.grid_sup = m.value;
  r.grid_arg = n == 0 ? 0.0 : x[m.index];
  r.near_zero = m.near_zero;
  r.tail_known = false;
  r.tail_limit = std::numeric_limits<double>::quiet_NaN();
  r.value = r.grid_sup;
  return r;
}

cplx interpolate(const std::vector<double>& grid, const std::vector<cplx>& v, double x) {
  const auto it = std::upper_bound(grid.begin(), grid.end(), x);
  if (it == grid.begin()) return v.front();
  if (it == grid.end()) return v.back();
  const auto k = static_cast<std::size_t>(it - grid.begin());
  const double t = (x - grid[k - 1]) / (grid[k] - grid[k - 1]);
  return (1.0 - t) * v[k - 1] + t * v[k];
}

void check_standing_assumptions(const SymbolTriple& s, std::span<const double> grid) {
  const auto check = [&s](double l) {
    const cplx a = s.a_at(l);
    const cplx b = s.b_at(l);
    const double tol = 1e-12 * (1.0 + std::abs(a) + std::abs(b));
    if (std::abs(a.imag()) > tol || !(a.real() > 0.0) || std::abs(b.imag()) > tol || b.real() < -tol) {
      throw Error(ErrorKind::domain_violation,
                  "symbol needs real a > 0 and real b >= 0; violated at lambda = " + std::to_string(l));
    }
  };
  if (s.kind == SymbolTriple::Kind::sampled) {
    for (double l : s.grid) check(l);
  } else {
    for (double l : grid) check(l);
  }
}

// Golden-section minimum of a convex function on [lo, hi].
template <class F>
double golden_min(F f, double lo, double hi) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo);
  double x2 = lo + g * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-13 * (1.0 + std::abs(lo)); ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    }
  }
  return std::min(f1, f2);
}

}  // namespace

SymbolTriple SymbolTriple::closed_form(Rational a, Rational b, Rational c, std::string label) {
  SymbolTriple s;
  s.kind = Kind::closed_form;
  s.a = std::move(a);
  s.b = std::move(b);
  s.c = std::move(c);
  s.label = std::move(label);
  return s;
}

SymbolTriple SymbolTriple::sampled(std::vector<double> grid, std::vector<cplx> a, std::vector<cplx> b,
                                   std::vector<cplx> c, std::string label) {
  if (grid.size() < 2 || a.size() != grid.size() || b.size() != grid.size() || c.size() != grid.size()) {
    throw Error(ErrorKind::dimension_mismatch, "sampled symbol needs >= 2 samples of a, b and c on the grid");
  }
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (!(grid[k] > grid[k - 1])) throw Error(ErrorKind::invalid_argument, "sample grid must be increasing");
  }
  SymbolTriple s;
  s.kind = Kind::sampled;
  s.grid = std::move(grid);
  s.a_s = std::move(a);
  s.b_s = std::move(b);
  s.c_s = std::move(c);
  s.label = std::move(label);
  return s;
}

bool SymbolTriple::in_domain(double lambda) const noexcept {
  if (!std::isfinite(lambda)) return false;
  if (kind == Kind::closed_form) return true;
  return lambda >= grid.front() && lambda <= grid.back();
}

namespace {

cplx symbol_value(const SymbolTriple& s, const Rational& f, const std::vector<cplx>& samples, double lambda) {
  if (!s.in_domain(lambda)) {
    throw Error(ErrorKind::domain_violation, "lambda = " + std::to_string(lambda) + " outside the symbol domain");
  }
  return s.kind == SymbolTriple::Kind::closed_form ? f(lambda) : interpolate(s.grid, samples, lambda);
}

}  // namespace

cplx SymbolTriple::a_at(double lambda) const { return symbol_value(*this, a, a_s, lambda); }
cplx SymbolTriple::b_at(double lambda) const { return symbol_value(*this, b, b_s, lambda); }
cplx SymbolTriple::c_at(double lambda) const { return symbol_value(*this, c, c_s, lambda); }

void GLSymbolParams::validate() const {
  if (!(m > 0.0) || !std::isfinite(m)) throw Error(ErrorKind::invalid_argument, "mass m must be positive");
  if (!(std::abs(nu) < 1.0)) throw Error(ErrorKind::nu_out_of_range, "nu must lie in (-1, 1)");
}

SymbolTriple gl_symbol(const GLSymbolParams& p, SymbolGauge gauge) {
  p.validate();
  const Poly a({p.m * p.m, 0.0, 1.0});
  const Poly c = gauge == SymbolGauge::fourier ? Poly({0.0, -kI * p.nu}) : Poly({0.0, p.nu});
  return SymbolTriple::closed_form(a, Poly::constant(1.0), c,
                                   gauge == SymbolGauge::fourier ? "gl-fourier" : "gl-real");
}

bool BandSet::contains(double x) const noexcept { return distance(x) == 0.0; }

double BandSet::distance(double x) const noexcept {
  double best = kInf;
  for (const auto& b : bands) {
    if (x >= b.lo && x <= b.hi) return 0.0;
    best = std::min(best, x < b.lo ? b.lo - x : x - b.hi);
  }
  return best;
}

BandSet BandSet::merged(std::vector<Band> raw) {
  std::sort(raw.begin(), raw.end(), [](const Band& a, const Band& b) { return a.lo < b.lo; });
  BandSet out;
  for (const auto& b : raw) {
    if (!out.bands.empty() && b.lo <= out.bands.back().hi) {
      out.bands.back().hi = std::max(out.bands.back().hi, b.hi);
    } else {
      out.bands.push_back(b);
    }
  }
  return out;
}

std::vector<double> default_lambda_grid() {
  std::vector<double> g;
  g.reserve(20001);
  const double ratio = std::pow(1e5, 1.0 / 5000.0);
  for (int k = 5000; k >= 1; --k) g.push_back(-10.0 * std::pow(ratio, k));
  for (int k = 0; k <= 10000; ++k) g.push_back(-10.0 + 20.0 * k / 10000.0);
  for (int k = 1; k <= 5000; ++k) g.push_back(10.0 * std::pow(ratio, k));
  return g;
}

std::vector<double> band_sweep_grid() {
  std::vector<double> g;
  g.reserve(20001);
  // Uniform in l near 0, where the branches can leave a double eigenvalue
  // linearly, then uniform in l^2.
  for (int k = 0; k <= 4000; ++k) g.push_back(k / 4000.0);
  const double knee = std::sqrt(12.0);
  for (int k = 1; k <= 12000; ++k) g.push_back(std::sqrt(1.0 + 11.0 * k / 12000.0));
  const double ratio = std::pow(1e4 / knee, 1.0 / 4000.0);
  for (int k = 1; k <= 4000; ++k) g.push_back(knee * std::pow(ratio, k));
  return g;
}

CMatrix symbol_matrix_A(const SymbolTriple& s, double lambda) {
  const cplx c = s.c_at(lambda);
  return CMatrix::from_rows({{s.a_at(lambda), std::conj(c)}, {c, s.b_at(lambda)}});
}

CMatrix symbol_matrix_L(const SymbolTriple& s, double lambda) {
  const cplx c = s.c_at(lambda);
  return CMatrix::from_rows({{kI * c, kI * s.b_at(lambda)}, {-kI * s.a_at(lambda), -kI * std::conj(c)}});
}

cplx symbol_det_A(const GLSymbolParams& p, double lambda, cplx z) {
  const double l2 = lambda * lambda;
  return l2 * (1.0 - z - p.nu * p.nu) + (p.m * p.m - z) * (1.0 - z);
}

BandSet ess_spectrum_bands(const GLSymbolParams& p) {
  p.validate();
  const double m2 = p.m * p.m;
  const double s = 1.0 - p.nu * p.nu;
  std::vector<Band> raw;
  if (m2 >= 1.0) {
    raw = {{s, 1.0}, {m2, kInf}};
  } else if (m2 >= s) {
    raw = {{s, m2}, {1.0, kInf}};
  } else {
    raw = {{m2, s}, {1.0, kInf}};
  }
  return BandSet::merged(std::move(raw));
}

bool band_membership(const GLSymbolParams& p, double z) {
  const double s = 1.0 - p.nu * p.nu;
  if (z == s) return true;
  const double m2 = p.m * p.m;
  return (z - m2) * (z - 1.0) / (z - s) >= 0.0;
}

BandFill band_fill_check(const GLSymbolParams& p, double band_tol, double window, std::span<const double> grid) {
  p.validate();
  std::vector<double> owned;
  if (grid.empty()) {
    owned = band_sweep_grid();
    grid = owned;
  }
  const BandSet bands = ess_spectrum_bands(p);
  std::vector<double> lo(grid.size());
  std::vector<double> hi(grid.size());
  simd::kernels().gl_symbol_eigs(grid.data(), grid.size(), p.m * p.m, p.nu, lo.data(), hi.data());
  std::vector<double> samples;
  samples.reserve(2 * grid.size());
  samples.insert(samples.end(), lo.begin(), lo.end());
  samples.insert(samples.end(), hi.begin(), hi.end());
  std::sort(samples.begin(), samples.end());

  BandFill f;
  f.samples = samples.size();
  f.band_tol = band_tol;
  for (double v : samples) f.max_outside = std::max(f.max_outside, bands.distance(v));
  for (const auto& b : bands.bands) {
    const double top = std::isfinite(b.hi) ? b.hi : b.lo + window;
    auto first = std::lower_bound(samples.begin(), samples.end(), b.lo - band_tol);
    auto last = std::upper_bound(samples.begin(), samples.end(), top + band_tol);
    if (first == last) {
      f.max_uncovered = kInf;
      continue;
    }
    double worst = std::max(*first - b.lo, top - *(last - 1));
    for (auto it = first + 1; it != last; ++it) worst = std::max(worst, 0.5 * (*it - *(it - 1)));
    f.max_uncovered = std::max(f.max_uncovered, std::max(worst, 0.0));
  }
  f.hausdorff = std::max(f.max_outside, f.max_uncovered);
  f.ok = f.hausdorff <= band_tol;
  return f;
}

bool SupResult::finite() const noexcept { return !pole && std::isfinite(value); }

ResolventMembership resolvent_membership(const SymbolTriple& s, cplx z, std::span<const double> grid,
                                         double ess_sup_cap) {
  check_standing_assumptions(s, grid);
  ResolventMembership r;
  r.ess_sup_cap = ess_sup_cap;
  r.sup = sup_a_over_d(s, z, 1.0, grid);
  r.in_resolvent = r.sup.finite() && r.sup.value < ess_sup_cap;
  return r;
}

LSymbolSpectrum spectrum_L_symbol(const GLSymbolParams& p, std::span<const double> grid) {
  p.validate();
  std::vector<double> owned;
  if (grid.empty()) {
    owned = default_lambda_grid();
    grid = owned;
  }
  LSymbolSpectrum out;
  out.gap_closed_form = p.m * std::sqrt(1.0 - p.nu * p.nu);
  out.bands = BandSet::merged({{-kInf, -out.gap_closed_form}, {out.gap_closed_form, kInf}});

  std::vector<double> lo(grid.size());
  std::vector<double> hi(grid.size());
  const double m2 = p.m * p.m;
  simd::kernels().gl_l_branches(grid.data(), grid.size(), m2, p.nu, lo.data(), hi.data());
  const auto ihi = static_cast<std::size_t>(std::min_element(hi.begin(), hi.end()) - hi.begin());
  const auto ilo = static_cast<std::size_t>(std::max_element(lo.begin(), lo.end()) - lo.begin());
  auto bracket = [&grid](std::size_t k) {
    return std::pair{grid[k == 0 ? 0 : k - 1], grid[std::min(k + 1, grid.size() - 1)]};
  };
  const double nu = p.nu;
  const auto [a1, b1] = bracket(ihi);
  out.gap_sweep_hi = std::min(hi[ihi], golden_min([&](double l) { return nu * l + std::sqrt(l * l + m2); }, a1, b1));
  const auto [a2, b2] = bracket(ilo);
  out.gap_sweep_lo =
      std::max(lo[ilo], -golden_min([&](double l) { return -(nu * l - std::sqrt(l * l + m2)); }, a2, b2));
  return out;
}

RealSpectrumCriterion real_spectrum_criterion(const SymbolTriple& s, std::span<const double> grid,
                                              double ess_sup_cap) {
  check_standing_assumptions(s, grid);
  RealSpectrumCriterion r;
  r.min_positivity = kInf;
  const auto positivity = [&](double l) {
    const cplx a = s.a_at(l);
    const cplx b = s.b_at(l);
    const cplx c = s.c_at(l);
    const double v = (a * b).real() - std::norm(c);
    r.min_positivity = std::min(r.min_positivity, v);
    if (v < -1e-12 * (std::abs(a * b) + std::norm(c))) {
      throw Error(ErrorKind::positivity_violated, "ab - |c|^2 < 0 at lambda = " + std::to_string(l));
    }
  };
  if (s.kind == SymbolTriple::Kind::sampled) {
    for (double l : s.grid) positivity(l);
  } else {
    for (double l : grid) positivity(l);
  }
  r.sup = sup_a_over_d(s, kI, 1.0, grid);
  r.holds = r.sup.finite() && r.sup.value < ess_sup_cap;
  return r;
}

SupResult lrg_sup(const SymbolTriple& s, cplx z, std::span<const double> grid, LrgIntegrand integrand) {
  if (z.imag() == 0.0) throw Error(ErrorKind::invalid_argument, "LRG supremum needs non-real z");
  check_standing_assumptions(s, grid);
  if (integrand == LrgIntegrand::resolvent_entry) return sup_a_over_d(s, z, -1.0, grid);
  if (s.kind == SymbolTriple::Kind::sampled) {
    const auto x = sampled_abscissae(s, grid);
    SupResult r;
    r.tail_known = false;
    r.tail_limit = std::numeric_limits<double>::quiet_NaN();
    for (double l : x) {
      const cplx a = s.a_at(l);
      const cplx b = s.b_at(l);
      const cplx c = s.c_at(l);
      const cplx d = a * b - (c - kI * z) * (std::conj(c) + kI * z);
      if (std::abs(d) <= kNearZeroAbs) {
        ++r.near_zero;
        continue;
      }
      const double v = (std::abs(a) + std::abs(b) + std::abs(z)) / std::abs(d);
      if (v > r.grid_sup) {
        r.grid_sup = v;
        r.grid_arg = l;
      }
    }
    r.value = r.grid_sup;
    return r;
  }

  const Rational d = denominator(s, z, -1.0);
  SupResult r;
  for (double l : grid) {
    const cplx dv = d(l);
    if (std::abs(dv) <= kNearZeroAbs) {
      ++r.near_zero;
      continue;
    }
    const double v = (std::abs(s.a(l)) + std::abs(s.b(l)) + std::abs(z)) / std::abs(dv);
    if (v > r.grid_sup) {
      r.grid_sup = v;
      r.grid_arg = l;
    }
  }
  r.tail_limit = tail_limit(s.a.num * d.den, s.a.den * d.num) + tail_limit(s.b.num * d.den, s.b.den * d.num) +
                 std::abs(z) * tail_limit(d.den, d.num);
  for (double x : d.num.real_roots()) {
    if (std::abs(d.den(x)) > 1e-8 * d.den.magnitude(x)) {
      r.pole = true;
      r.pole_locations.push_back(x);
    }
  }
  r.value = r.pole ? kInf : std::max(r.grid_sup, r.tail_limit);
  return r;
}

CMatrix symbol_resolvent(const SymbolTriple& s, double lambda, cplx z) {
  const cplx a = s.a_at(lambda);
  const cplx b = s.b_at(lambda);
  const cplx c = s.c_at(lambda);
  const cplx det = (kI * c - z) * (-kI * std::conj(c) - z) - a * b;
  const double scale = std::abs(a * b) + std::norm(c) + std::norm(z) + 1.0;
  if (std::abs(det) <= 1e-14 * scale) {
    throw Error(ErrorKind::symbol_singular, "L(lambda) - z is singular at lambda = " + std::to_string(lambda));
  }
  return CMatrix::from_rows({{(-kI * std::conj(c) - z) / det, -kI * b / det}, {kI * a / det, (kI * c - z) / det}});
}

}  // namespace blockspec
