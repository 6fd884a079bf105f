#include "blockspec/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "blockspec/direct_sum.hpp"
#include "blockspec/random_blocks.hpp"
#include "blockspec/schrodinger.hpp"
#include "blockspec/symbol.hpp"

namespace blockspec {

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(4);
  os << x;
  return os.str();
}

Region region_around(std::span<const cplx> eigs) {
  double r = 0.0;
  for (const cplx z : eigs) r = std::max({r, std::abs(z.real()), std::abs(z.imag())});
  r += 0.5;
  return {-r, r, -r, r};
}

// Zero-energy condition k tan(k w/2) = m / sqrt(kappa) for the even ground
// state of -kappa f'' + (m^2 - d) f on a well of width w; returns the depth d.
double well_threshold(double kappa, double m, double width) {
  const double a = 0.5 * width;
  const double q = m / std::sqrt(kappa);
  double lo = 0.0;
  double hi = 0.5 * std::numbers::pi / a;
  for (int it = 0; it < 200; ++it) {
    const double k = 0.5 * (lo + hi);
    (k * std::tan(k * a) < q ? lo : hi) = k;
  }
  const double k = 0.5 * (lo + hi);
  return m * m + kappa * k * k;
}

struct Well {
  double depth;
  double width;
};

std::vector<Well> straddling_wells(Rng& rng, double m, double nu, std::size_t count) {
  const double widths[] = {1.5, 2.0, 3.0};
  std::uniform_real_distribution<double> factor(0.7, 1.3);
  std::vector<Well> out;
  for (std::size_t k = 0; k < count; ++k) {
    const double w = widths[k % 3];
    const double d_nu = well_threshold(1.0 - nu * nu, m, w);
    const double d_v = well_threshold(1.0, m, w);
    for (;;) {
      const double d = factor(rng) * d_nu;
      if (std::abs(d - d_nu) < 0.05 * d_nu || std::abs(d - d_v) < 0.05 * d_v) continue;
      out.push_back({d, w});
      break;
    }
  }
  return out;
}

// 1
Outcome band_formula(const VerifyOptions& o) {
  const double tol = o.band_tol.value_or(1e-3);
  struct Case {
    GLSymbolParams p;
    std::vector<Band> expect;
  };
  const Case cases[] = {
      {{2.0, 0.6}, {{0.64, 1.0}, {4.0, INFINITY}}},
      {{0.9, 0.6}, {{0.64, 0.81}, {1.0, INFINITY}}},
      {{0.9, 0.4}, {{0.81, 0.84}, {1.0, INFINITY}}},
  };
  bool ok = true;
  std::string detail;
  for (const auto& c : cases) {
    const BandSet got = ess_spectrum_bands(c.p);
    bool same = got.bands.size() == c.expect.size();
    for (std::size_t k = 0; same && k < got.bands.size(); ++k) {
      same = std::abs(got.bands[k].lo - c.expect[k].lo) <= 1e-12 &&
             (std::isinf(c.expect[k].hi) ? std::isinf(got.bands[k].hi)
                                          : std::abs(got.bands[k].hi - c.expect[k].hi) <= 1e-12);
    }
    const BandFill fill = band_fill_check(c.p, tol);
    ok = ok && same && fill.ok;
    detail += "(m=" + fmt(c.p.m) + ",nu=" + fmt(c.p.nu) + ") formula=" + (same ? "ok" : "MISMATCH") +
              " fill=" + fmt(fill.hausdorff) + "; ";
  }
  return {ok, detail + "tol " + fmt(tol)};
}

// 2
Outcome determinant_identity(Rng& rng) {
  std::uniform_real_distribution<double> um(0.2, 3.0), unu(-0.95, 0.95), ul(-50.0, 50.0), uz(-5.0, 5.0);
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const GLSymbolParams p{um(rng), unu(rng)};
    const double l = ul(rng);
    const cplx z{uz(rng), uz(rng)};
    const CMatrix M = shifted(symbol_matrix_A(gl_symbol(p), l), z);
    const cplx numeric = determinant(M);
    const cplx closed = symbol_det_A(p, l, z);
    const double scale = std::abs(M(0, 0)) * std::abs(M(1, 1)) + std::abs(M(0, 1)) * std::abs(M(1, 0));
    worst = std::max(worst, std::abs(numeric - closed) / scale);
  }
  return {worst <= 1e-12, "max relative deviation " + fmt(worst) + " over 10000 samples (tol 1e-12)"};
}

// 3
Outcome kappa_additivity(Rng& rng) {
  std::size_t fails = 0;
  std::size_t nonzero = 0;
  for (int k = 0; k < 200; ++k) {
    const auto c = random_blocks(rng, 1 + k % 6);
    const auto d = kappa_decomposition(c, 1e-10);
    if (!d.consistent) ++fails;
    if (d.kappa_Acal.n_neg > 0) ++nonzero;
  }
  std::size_t gl_fails = 0;
  std::size_t gl_neg = 0;
  for (const Well& w : straddling_wells(rng, 1.0, 0.6, 30)) {
    const auto d = assemble_gl({20.0, 201}, 1.0, 0.6, Potential::square_well(w.depth, w.width));
    const auto kd = kappa_decomposition(d.coeffs, 1e-10);
    if (!kd.consistent) ++gl_fails;
    if (kd.kappa_Acal.n_neg > 0) ++gl_neg;
  }
  return {fails == 0 && gl_fails == 0, "random: " + std::to_string(fails) + "/200 failures (" +
                                           std::to_string(nonzero) + " with kappa_- > 0); wells: " +
                                           std::to_string(gl_fails) + "/30 failures (" + std::to_string(gl_neg) +
                                           " indefinite)"};
}

// 4
Outcome frobenius_schur(Rng& rng) {
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const auto c = random_blocks(rng, 1 + k % 6);
    for (int j = 0; j < 20; ++j) {
      const cplx z = random_z_off_spectrum(rng, c.A, 3.0, 0.05);
      worst = std::max(worst, frobenius_schur_residuals(c, z).max());
    }
  }
  return {worst <= 1e-9, "max relative residual " + fmt(worst) + " over 4000 (instance, z) pairs (tol 1e-9)"};
}

// 5
Outcome spectrum_equivalence(Rng& rng, unsigned threads) {
  double worst = 0.0;
  std::size_t roots = 0;
  ViaTOptions vo;
  vo.threads = threads;
  for (int k = 0; k < 60; ++k) {
    const auto c = random_blocks(rng, 1 + k % 6);
    const auto direct = spectrum_L_direct(c).values;
    const auto via = spectrum_L_via_T(c, region_around(direct), vo);
    roots += via.roots.size();
    worst = std::max(worst, hausdorff_distance(direct, via.roots));
  }
  return {worst <= 1e-6, "max Hausdorff distance " + fmt(worst) + " over 60 instances, " + std::to_string(roots) +
                             " roots (tol 1e-6)"};
}

// 6
Outcome symmetry_and_bound(Rng& rng) {
  std::size_t asym = 0;
  std::size_t over = 0;
  std::size_t with_nonreal = 0;
  RandomBlockOptions ind;
  ind.require_indefinite_A = true;
  for (int k = 0; k < 100; ++k) {
    const auto c = random_blocks(rng, 1 + k % 6, ind);
    const auto eigs = spectrum_L_direct(c).values;
    if (!spectral_symmetry_check(eigs, 1e-8).symmetric) ++asym;
    const auto b = nonreal_count_bound(c, 1e-8);
    if (!b.ok) ++over;
    if (b.nonreal > 0) ++with_nonreal;
  }
  RandomBlockOptions pos;
  pos.flavor = BlockFlavor::positive;
  double max_im = 0.0;
  for (int k = 0; k < 50; ++k) {
    const auto c = random_blocks(rng, 1 + k % 6, pos);
    for (const cplx z : spectrum_L_direct(c).values) max_im = std::max(max_im, std::abs(z.imag()));
  }
  const bool ok = asym == 0 && over == 0 && max_im <= 1e-8;
  return {ok, "indefinite: " + std::to_string(asym) + " asymmetric, " + std::to_string(over) +
                  " over bound, " + std::to_string(with_nonreal) + "/100 with non-real spectrum; positive: max|Im| " +
                  fmt(max_im)};
}

// 7
Outcome projector_diagnostics() {
  // ||T(i)^{-1}|| from the assembled matrices and from the diagonal scan.
  double t_err = 0.0;
  for (std::size_t N : {1u, 5u, 40u}) {
    DiagonalModel m;
    for (std::size_t a = 1; a <= N; ++a) m.weights.push_back(static_cast<double>(a));
    const auto c = m.coefficients();
    const double direct = spectral_norm(inverse(schur_T(c, {0.0, 1.0})));
    const double expect = static_cast<double>(N) / static_cast<double>(N + 1);
    t_err = std::max(t_err, std::abs(direct - expect));
  }
  DiagonalModel big;
  for (int a = 1; a <= 1000; ++a) big.weights.push_back(a);
  const auto scan = t_inverse_norm_scan(big, {0.0, 1.0});
  t_err = std::max(t_err, std::abs(scan.last - 1000.0 / 1001.0));

  double p_err = 0.0;
  for (double a : big.weights) {
    const double expect = (a + 1.0) / (2.0 * std::sqrt(a));
    p_err = std::max(p_err, std::abs(projector_norm(a, BRule::identity) - expect) / expect);
  }
  const auto g = projector_growth_scan(big);
  const bool ok = t_err <= 1e-12 && p_err <= 1e-10 && std::abs(g.exponent - 0.5) <= 0.02;
  return {ok, "||T(i)^-1|| error " + fmt(t_err) + " (tol 1e-12), projector error " + fmt(p_err) +
                  " (tol 1e-10), exponent " + fmt(g.exponent) + " (0.5 +- 0.02)"};
}

// 8
Outcome inverse_rule_probe() {
  DiagonalModel small;
  small.b_rule = BRule::inverse;
  for (int a = 1; a <= 30; ++a) small.weights.push_back(a);
  const auto c = small.coefficients();
  const double t_plus = schur_T(c, 1.0).max_abs();
  const double t_minus = schur_T(c, -1.0).max_abs();
  const double direct = spectral_norm(inverse(schur_T(c, {0.0, 2.0})));
  const double direct_err = std::abs(direct - 30.0 / 5.0) / (30.0 / 5.0);

  DiagonalModel big;
  big.b_rule = BRule::inverse;
  for (int a = 1; a <= 1000; ++a) big.weights.push_back(a);
  const auto p = definitizability_probe(big, {0.0, 2.0});
  const bool ok = t_plus == 0.0 && t_minus == 0.0 && p.t_at_plus_one == 0.0 && p.t_at_minus_one == 0.0 &&
                  direct_err <= 1e-10 && p.linear_fit_error <= 1e-10 && p.scan.nondecreasing;
  return {ok, "max|T(+1)| " + fmt(t_plus) + ", max|T(-1)| " + fmt(t_minus) + ", ratio error " +
                  fmt(std::max(direct_err, p.linear_fit_error)) + " (tol 1e-10)"};
}

// 9
Outcome lrg_failure(unsigned threads) {
  const GLSymbolParams p{1.0, 0.5};
  const auto s = gl_symbol(p);
  const auto grid = default_lambda_grid();
  const double bound = 1.0 / (1.0 - p.nu * p.nu);
  bool sym_ok = true;
  std::vector<double> prod;
  std::string detail = "symbol sup:";
  for (double y : {1.0, 10.0, 100.0}) {
    const auto r = lrg_sup(s, {0.0, y}, grid, LrgIntegrand::resolvent_entry);
    sym_ok = sym_ok && r.value >= bound * (1.0 - 1e-12);
    prod.push_back(y * r.value);
    detail += " " + fmt(r.value);
  }
  for (std::size_t k = 1; k < prod.size(); ++k) sym_ok = sym_ok && prod[k] >= 9.0 * prod[k - 1];
  detail += " (>= " + fmt(bound) + ")";

  const auto d = assemble_gl({40.0, 800}, 1.0, 0.6, Potential::zero());
  LrgOptions lo;
  lo.threads = threads;
  const double ys[] = {5.0, 10.0, 20.0, 50.0};
  const auto scan = lrg_scan(d.coeffs, ys, lo);
  const double growth = scan.points.back().product / scan.points.front().product;
  detail += "; discrete y||(L-iy)^-1||:";
  for (const auto& pt : scan.points) detail += " " + fmt(pt.product);
  detail += ", growth 5->50 " + fmt(growth) + " (need >= 5)";
  return {sym_ok && growth >= 5.0, detail};
}

// 10
Outcome spectral_gap(const VerifyOptions& o) {
  const double tol = o.band_tol.value_or(2e-2);
  const auto d = assemble_gl({40.0, 800}, 1.0, 0.6, Potential::zero());
  const auto eigs = spectrum_L_direct(d.coeffs).values;
  const double gap = spectrum_L_symbol({1.0, 0.6}).gap_closed_form;
  double min_re = INFINITY;
  double max_im = 0.0;
  for (const cplx z : eigs) {
    min_re = std::min(min_re, std::abs(z.real()));
    max_im = std::max(max_im, std::abs(z.imag()));
  }
  return {min_re >= gap - tol && max_im <= 1e-8,
          "min|Re| " + fmt(min_re) + " vs gap " + fmt(gap) + " - " + fmt(tol) + ", max|Im| " + fmt(max_im)};
}

// 11
Outcome positivity(Rng& rng) {
  std::size_t disagree = 0;
  std::size_t nonneg = 0;
  for (const Well& w : straddling_wells(rng, 1.0, 0.6, 30)) {
    const auto p =
        positivity_equivalence({20.0, 401}, 1.0, 0.6, Potential::square_well(w.depth, w.width), 1e-10);
    if (!p.equivalent) ++disagree;
    if (p.Acal_nonneg) ++nonneg;
  }
  return {disagree == 0, std::to_string(disagree) + "/30 disagreements; " + std::to_string(nonneg) +
                             " nonnegative, " + std::to_string(30 - nonneg) + " indefinite"};
}

// 12
Outcome factorization_identity() {
  const auto d = assemble_gl({40.0, 400}, 1.0, 0.5, Potential::zero());
  double worst = 0.0;
  for (double y : {0.5, 1.0, 3.0, 10.0, 50.0}) worst = std::max(worst, factorization_identity_check(d, y));
  return {worst <= 1e-9, "max relative residual " + fmt(worst) + " (tol 1e-9)"};
}

// 13
Outcome greens_function() {
  const auto g = greens_check({30.0, 1200}, 1.0);
  return {g.normwise_rel <= 1e-3, "max error / max G " + fmt(g.normwise_rel) + " (tol 1e-3); entrywise " +
                                      fmt(g.pointwise_rel) + ", G(0,0) " + fmt(g.center_value)};
}

// 14
Outcome convergence_order() {
  std::vector<std::vector<cplx>> levels;
  for (std::size_t n : {201u, 401u, 801u}) {
    const auto d = assemble_gl({40.0, n}, 1.0, 0.6, Potential::zero());
    auto e = eigenvalues(assemble_jsa(d.coeffs));
    std::sort(e.begin(), e.end(), [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });
    e.resize(10);
    std::sort(e.begin(), e.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
    levels.push_back(std::move(e));
  }
  double lo = INFINITY;
  double hi = 0.0;
  for (std::size_t k = 0; k < 10; ++k) {
    const double r = std::abs(levels[0][k] - levels[1][k]) / std::abs(levels[1][k] - levels[2][k]);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return {lo >= 4.0 * 0.85 && hi <= 4.0 * 1.15, "reduction ratios in [" + fmt(lo) + ", " + fmt(hi) + "] (4 +- 15%)"};
}

}  // namespace

const std::vector<CriterionInfo>& criteria() {
  static const std::vector<CriterionInfo> list = {
      {1, "band_formula", {"bands", "symbol"}},
      {2, "determinant_identity", {"symbol"}},
      {3, "kappa_additivity", {"kappa", "blocks", "gl"}},
      {4, "frobenius_schur_residual", {"blocks", "factorization"}},
      {5, "spectrum_equivalence", {"blocks", "spectrum"}},
      {6, "spectral_symmetry", {"blocks", "spectrum"}},
      {7, "projector_growth", {"dsum"}},
      {8, "inverse_rule_probe", {"dsum"}},
      {9, "lrg_failure", {"lrg", "symbol", "gl"}},
      {10, "spectral_gap", {"gap", "gl"}},
      {11, "positivity_equivalence", {"positivity", "gl"}},
      {12, "factorization_identity", {"factorization", "gl"}},
      {13, "greens_function", {"greens", "gl"}},
      {14, "convergence_order", {"convergence", "gl"}},
  };
  return list;
}

bool matches_filter(const CriterionInfo& c, const std::string& filter) {
  if (filter.empty()) return true;
  if (filter == std::to_string(c.id) || filter == c.name) return true;
  return std::find(c.tags.begin(), c.tags.end(), filter) != c.tags.end();
}

std::vector<CriterionResult> verify_all(const VerifyOptions& opts) {
  std::vector<CriterionResult> out;
  for (const auto& info : criteria()) {
    if (!matches_filter(info, opts.filter)) continue;
    // Each criterion draws from its own stream so filtering does not change results.
    Rng rng(opts.seed + static_cast<std::uint64_t>(info.id));
    CriterionResult r;
    r.id = info.id;
    r.name = info.name;
    r.tags = info.tags;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      switch (info.id) {
        case 1: o = band_formula(opts); break;
        case 2: o = determinant_identity(rng); break;
        case 3: o = kappa_additivity(rng); break;
        case 4: o = frobenius_schur(rng); break;
        case 5: o = spectrum_equivalence(rng, opts.threads); break;
        case 6: o = symmetry_and_bound(rng); break;
        case 7: o = projector_diagnostics(); break;
        case 8: o = inverse_rule_probe(); break;
        case 9: o = lrg_failure(opts.threads); break;
        case 10: o = spectral_gap(opts); break;
        case 11: o = positivity(rng); break;
        case 12: o = factorization_identity(); break;
        case 13: o = greens_function(); break;
        case 14: o = convergence_order(); break;
        default: o = {false, "unknown criterion"};
      }
    } catch (const Error& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    r.pass = o.pass;
    r.detail = o.detail;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace blockspec
