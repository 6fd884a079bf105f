#include "blockspec/block_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

#include "blockspec/parallel.hpp"

namespace blockspec {

namespace {

constexpr cplx kI{0.0, 1.0};

double relative_residual(const CMatrix& target, const CMatrix& approx) {
  const double scale = target.frobenius_norm();
  return (target - approx).frobenius_norm() / (scale > 0.0 ? scale : 1.0);
}

cplx trace(const CMatrix& m) {
  cplx t{};
  for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
  return t;
}

void require_shapes(const BlockCoefficients& c) {
  const std::size_t n = c.A.rows();
  if (n == 0) throw Error(ErrorKind::dimension_mismatch, "empty block coefficients");
  auto square_n = [n](const CMatrix& m) { return m.rows() == n && m.cols() == n; };
  if (!square_n(c.A) || !square_n(c.B) || !square_n(c.C)) {
    throw Error(ErrorKind::dimension_mismatch, "A, B and C must all be " + std::to_string(n) + "x" +
                                                   std::to_string(n));
  }
  if (!c.A.all_finite() || !c.B.all_finite() || !c.C.all_finite()) {
    throw Error(ErrorKind::non_finite, "block coefficients contain NaN or Inf");
  }
}

LuFactor factor_A(const BlockCoefficients& c) {
  LuFactor lu(c.A);
  if (lu.below_floor()) {
    throw Error(ErrorKind::singular_a,
                "A is singular (rcond " + std::to_string(lu.rcond()) + "); 0 must lie in the resolvent set of A");
  }
  return lu;
}

LuFactor factor_shifted_A(const BlockCoefficients& c, cplx z) {
  LuFactor lu(shifted(c.A, z));
  if (lu.below_floor()) {
    throw Error(ErrorKind::z_in_spectrum_a, "A - z is singular at z = (" + std::to_string(z.real()) +
                                                ", " + std::to_string(z.imag()) + ")");
  }
  return lu;
}

double resolvent_norm(const CMatrix& shifted_op) {
  const double smin = min_singular_value(shifted_op);
  const double scale = std::max(1.0, spectral_norm(shifted_op));
  if (!(smin > LinalgTolerances::rcond_floor * scale)) {
    throw Error(ErrorKind::resolvent_singular, "resolvent does not exist at a grid point");
  }
  return 1.0 / smin;
}

LrgScan finish_scan(std::vector<LrgPoint> pts, const LrgOptions& opts) {
  std::sort(pts.begin(), pts.end(), [](const LrgPoint& a, const LrgPoint& b) { return a.y < b.y; });
  LrgScan out;
  out.K_report = opts.K_report;
  out.growth_factor = opts.growth_factor;
  for (const auto& p : pts) out.sup_product = std::max(out.sup_product, p.product);
  bool violated = false;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool monotone = true;
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (pts[j].product < pts[j - 1].product) monotone = false;
      if (pts[j].y < 10.0 * pts[i].y) continue;
      const double g = pts[j].product / pts[i].product;
      if (monotone) out.max_decade_growth = std::max(out.max_decade_growth, g);
      if (monotone && g >= opts.growth_factor) violated = true;
      break;
    }
  }
  out.points = std::move(pts);
  if (violated) {
    out.verdict = LrgVerdict::violated;
  } else if (out.sup_product <= opts.K_report) {
    out.verdict = LrgVerdict::consistent_on_grid;
  } else {
    out.verdict = LrgVerdict::inconclusive;
  }
  return out;
}

}  // namespace

BlockValidity validate(const BlockCoefficients& c) {
  require_shapes(c);
  require_hermitian(c.A, ErrorKind::non_hermitian_a);
  require_hermitian(c.B, ErrorKind::non_hermitian_b);
  BlockValidity v;
  v.rcond_A = factor_A(c).rcond();
  const auto w = hermitian_eigenvalues(c.A);
  const double scale = std::max(std::abs(w.front()), std::abs(w.back()));
  v.kappa_A = inertia_from_eigenvalues(w, LinalgTolerances::rcond_floor * scale);
  v.vacuous = {
      "kappa_-(A) finite",
      "C A^{-1} bounded on its domain",
      "the Schur complement on dom(A^{1/2}) is essentially self-adjoint",
  };
  return v;
}

CMatrix fundamental_symmetry(std::size_t n) {
  CMatrix j(2 * n, 2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    j(k, n + k) = kI;
    j(n + k, k) = -kI;
  }
  return j;
}

double fundamental_symmetry_defect(std::size_t n) {
  const CMatrix j = fundamental_symmetry(n);
  const double adj = (j - j.adjoint()).max_abs();
  const double inv = (j * j - CMatrix::identity(2 * n)).max_abs();
  return std::max(adj, inv);
}

CMatrix assemble_selfadjoint(const BlockCoefficients& c) {
  validate(c);
  return CMatrix::block2x2(c.A, c.C.adjoint(), c.C, c.B);
}

CMatrix assemble_jsa(const BlockCoefficients& c) {
  validate(c);
  return CMatrix::block2x2(kI * c.C, kI * c.B, -kI * c.A, -kI * c.C.adjoint());
}

CMatrix schur_S(const BlockCoefficients& c, cplx z) {
  require_shapes(c);
  const LuFactor lu = factor_shifted_A(c, z);
  return c.B - c.C * lu.solve(c.C.adjoint());
}

CMatrix TPencil::eval(cplx z) const { return P0 + z * P1 + (z * z) * P2; }

CMatrix TPencil::derivative(cplx z) const { return P1 + (2.0 * z) * P2; }

TPencil make_T_pencil(const BlockCoefficients& c) {
  require_shapes(c);
  const LuFactor lu = factor_A(c);
  const CMatrix a_inv = lu.inverse();
  const CMatrix cs = c.C.adjoint();
  TPencil p;
  p.P0 = c.B - c.C * lu.solve(cs);
  p.P1 = kI * (c.C * a_inv - a_inv * cs);
  p.P2 = -a_inv;
  return p;
}

CMatrix schur_T(const BlockCoefficients& c, cplx z) {
  require_shapes(c);
  const LuFactor lu = factor_A(c);
  const CMatrix left = add_identity(c.C, kI * z);
  const CMatrix right = add_identity(c.C.adjoint(), -kI * z);
  return c.B - left * lu.solve(right);
}

SchurEval schur_eval(const BlockCoefficients& c, cplx z) {
  SchurEval e;
  e.z = z;
  e.S_of_z = schur_S(c, z);
  e.T_of_z = schur_T(c, z);
  e.rcond_S = LuFactor(e.S_of_z).rcond();
  e.rcond_T = LuFactor(e.T_of_z).rcond();
  return e;
}

FactorizationResidual frobenius_schur_residuals(const BlockCoefficients& c, cplx z) {
  require_shapes(c);
  const std::size_t n = c.n();
  const CMatrix id = CMatrix::identity(n);
  const CMatrix zero(n, n);
  const CMatrix cs = c.C.adjoint();
  FactorizationResidual r;

  {
    const LuFactor lu = factor_shifted_A(c, z);
    const CMatrix a_shift = shifted(c.A, z);
    const CMatrix s = c.B - c.C * lu.solve(cs);
    const CMatrix lower = CMatrix::block2x2(id, zero, c.C * lu.inverse(), id);
    const CMatrix mid = CMatrix::block2x2(a_shift, zero, zero, shifted(s, z));
    const CMatrix upper = CMatrix::block2x2(id, lu.solve(cs), zero, id);
    const CMatrix target = shifted(CMatrix::block2x2(c.A, cs, c.C, c.B), z);
    r.selfadjoint = relative_residual(target, lower * mid * upper);
  }
  {
    const LuFactor lu = factor_A(c);
    const CMatrix left = add_identity(c.C, kI * z);
    const CMatrix right = add_identity(cs, -kI * z);
    const CMatrix t = c.B - left * lu.solve(right);
    const CMatrix u = CMatrix::block2x2(id, -(left * lu.inverse()), zero, id);
    const CMatrix m = CMatrix::block2x2(zero, kI * t, -kI * c.A, zero);
    const CMatrix w = CMatrix::block2x2(id, lu.solve(right), zero, id);
    const CMatrix target =
        shifted(CMatrix::block2x2(kI * c.C, kI * c.B, -kI * c.A, -kI * cs), z);
    r.jsa = relative_residual(target, u * m * w);
  }
  return r;
}

double frobenius_schur_check(const BlockCoefficients& c, cplx z) {
  return frobenius_schur_residuals(c, z).max();
}

KappaDecomposition kappa_decomposition(const BlockCoefficients& c, double tol) {
  validate(c);
  KappaDecomposition k;
  k.kappa_Acal = inertia(assemble_selfadjoint(c), tol);
  k.kappa_A = inertia(c.A, tol);
  k.kappa_S0 = inertia(schur_S(c, 0.0), tol);
  if (k.kappa_Acal.n_zero + k.kappa_A.n_zero + k.kappa_S0.n_zero > 0) {
    throw Error(ErrorKind::degenerate_inertia,
                "eigenvalue within " + std::to_string(tol) + " of zero; negative index is ambiguous");
  }
  k.consistent = k.kappa_Acal.n_neg == k.kappa_A.n_neg + k.kappa_S0.n_neg;
  return k;
}

LSpectrum spectrum_L_direct(const BlockCoefficients& c, bool with_condition) {
  auto eig = general_eig(assemble_jsa(c), true, with_condition);
  LSpectrum s;
  s.values = std::move(eig.values);
  s.residuals = std::move(eig.residuals);
  s.vectors = std::move(eig.vectors);
  s.vector_condition = eig.vector_condition;
  s.defective = eig.defective;
  return s;
}

double sv_zero_tol(const BlockCoefficients& c, cplx z) {
  const double a_inv = 1.0 / min_singular_value(c.A);
  const double cz = spectral_norm(c.C) + std::abs(z);
  return 1e-8 * (spectral_norm(c.B) + cz * cz * a_inv);
}

ViaTResult spectrum_L_via_T(const BlockCoefficients& c, const Region& region, const ViaTOptions& opts) {
  validate(c);
  if (opts.grid_re < 2 || opts.grid_im < 2) {
    throw Error(ErrorKind::invalid_argument, "search grid needs at least 2 points per axis");
  }
  if (!(region.re_hi > region.re_lo) || !(region.im_hi > region.im_lo)) {
    throw Error(ErrorKind::invalid_argument, "empty search region");
  }
  const TPencil pencil = make_T_pencil(c);
  const std::size_t n = c.n();
  const std::size_t degree = 2 * n;
  const std::size_t nr = opts.grid_re;
  const std::size_t ni = opts.grid_im;
  const double dre = (region.re_hi - region.re_lo) / static_cast<double>(nr - 1);
  const double dim = (region.im_hi - region.im_lo) / static_cast<double>(ni - 1);
  auto node = [&](std::size_t i, std::size_t j) {
    return cplx{region.re_lo + static_cast<double>(i) * dre, region.im_lo + static_cast<double>(j) * dim};
  };

  std::vector<double> smin(nr * ni);
  parallel_for(nr * ni, opts.threads, [&](std::size_t k) {
    smin[k] = min_singular_value(pencil.eval(node(k / ni, k % ni)));
  });

  std::vector<std::size_t> minima;
  for (std::size_t i = 0; i < nr; ++i) {
    for (std::size_t j = 0; j < ni; ++j) {
      const double v = smin[i * ni + j];
      bool is_min = true;
      for (int di = -1; di <= 1 && is_min; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const auto ii = static_cast<std::ptrdiff_t>(i) + di;
          const auto jj = static_cast<std::ptrdiff_t>(j) + dj;
          if (ii < 0 || jj < 0 || ii >= static_cast<std::ptrdiff_t>(nr) || jj >= static_cast<std::ptrdiff_t>(ni)) continue;
          if (smin[static_cast<std::size_t>(ii) * ni + static_cast<std::size_t>(jj)] < v) {
            is_min = false;
            break;
          }
        }
      }
      if (is_min) minima.push_back(i * ni + j);
    }
  }
  auto by_value = [&](std::size_t a, std::size_t b) { return smin[a] < smin[b]; };
  std::sort(minima.begin(), minima.end(), by_value);

  std::vector<std::size_t> fallback(nr * ni);
  std::iota(fallback.begin(), fallback.end(), std::size_t{0});
  const std::size_t extra = std::min(fallback.size(), 8 * degree);
  std::partial_sort(fallback.begin(), fallback.begin() + static_cast<std::ptrdiff_t>(extra), fallback.end(), by_value);
  fallback.resize(extra);

  std::vector<cplx> found;
  // Newton on det T: z -= 1/g with g = tr(T^{-1} T'). Linear at multiple roots,
  // so `schroeder` switches to z -= -g/g', which stays quadratic there.
  auto iterate = [&](cplx z, bool deflate, bool schroeder) -> std::pair<bool, cplx> {
    for (int it = 0; it < opts.newton_max_iter; ++it) {
      const LuFactor lu(pencil.eval(z));
      if (lu.exactly_singular()) return {true, z};
      const CMatrix td = lu.solve(pencil.derivative(z));
      cplx g = trace(td);
      cplx dg = 0.0;
      if (schroeder) dg = trace(lu.solve(2.0 * pencil.P2)) - trace(td * td);
      if (deflate) {
        for (const cplx r : found) {
          g -= 1.0 / (z - r);
          dg += 1.0 / ((z - r) * (z - r));
        }
      }
      const cplx step = schroeder ? -g / dg : 1.0 / g;
      if (step == cplx{} || !std::isfinite(step.real()) || !std::isfinite(step.imag())) return {false, z};
      z -= step;
      if (std::abs(step) <= 1e-14 * std::max(1.0, std::abs(z))) return {true, z};
    }
    return {false, z};
  };

  ViaTResult out;
  auto try_seed = [&](std::size_t k) {
    if (found.size() >= degree) return;
    ++out.seeds_tried;
    auto [ok, z] = iterate(node(k / ni, k % ni), true, false);
    if (!ok) std::tie(ok, z) = iterate(z, true, true);
    if (!ok) return;
    const double tol = sv_zero_tol(c, z);
    if (min_singular_value(pencil.eval(z)) > tol) return;
    auto [pok, zp] = iterate(z, false, false);
    if (pok && std::abs(zp - z) <= 1e-8 * std::max(1.0, std::abs(z))) z = zp;
    // One copy per null direction of T(z); defective remainders are left to
    // later seeds through deflation.
    const auto sv = singular_values(pencil.eval(z));
    const auto nullity = static_cast<std::size_t>(std::count_if(sv.begin(), sv.end(), [&](double v) { return v <= tol; }));
    const std::size_t copies = std::min(std::max<std::size_t>(nullity, 1), degree - found.size());
    found.insert(found.end(), copies, z);
  };
  for (std::size_t k : minima) try_seed(k);
  for (std::size_t k : fallback) try_seed(k);

  out.roots_total = found.size();
  for (const cplx z : found) {
    if (region.contains(z)) out.roots.push_back(z);
  }
  out.no_roots_in_region = out.roots.empty();
  return out;
}

double hausdorff_distance(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  auto directed = [](std::span<const cplx> from, std::span<const cplx> to) {
    double worst = 0.0;
    for (const cplx p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const cplx q : to) best = std::min(best, std::abs(p - q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

SymmetryCheck spectral_symmetry_check(std::span<const cplx> eigs, double pair_tol) {
  SymmetryCheck out;
  std::vector<std::size_t> nonreal;
  for (std::size_t i = 0; i < eigs.size(); ++i) {
    if (std::abs(eigs[i].imag()) > pair_tol * std::max(1.0, std::abs(eigs[i]))) nonreal.push_back(i);
  }
  std::vector<bool> used(eigs.size(), false);
  for (std::size_t i : nonreal) {
    if (used[i]) continue;
    used[i] = true;
    const cplx target = std::conj(eigs[i]);
    std::size_t best = eigs.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j : nonreal) {
      if (used[j]) continue;
      const double d = std::abs(eigs[j] - target);
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    if (best < eigs.size() && best_d <= pair_tol * std::max(1.0, std::abs(eigs[i]))) {
      used[best] = true;
      const cplx upper = eigs[i].imag() > 0.0 ? eigs[i] : eigs[best];
      const cplx lower = eigs[i].imag() > 0.0 ? eigs[best] : eigs[i];
      out.pairs.emplace_back(upper, lower);
    } else {
      out.unmatched.push_back(eigs[i]);
      out.symmetric = false;
    }
  }
  return out;
}

NonrealBound nonreal_count_bound(const BlockCoefficients& c, double tol) {
  const auto eigs = spectrum_L_direct(c).values;
  NonrealBound b;
  for (const cplx z : eigs) {
    if (std::abs(z.imag()) > tol) ++b.nonreal;
  }
  b.bound = 2 * inertia(assemble_selfadjoint(c), tol).n_neg;
  b.ok = b.nonreal <= b.bound;
  return b;
}

std::string_view to_string(LrgVerdict v) noexcept {
  switch (v) {
    case LrgVerdict::consistent_on_grid: return "consistent-on-grid";
    case LrgVerdict::violated: return "violated";
    case LrgVerdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

LrgScan lrg_scan_matrix(const CMatrix& op, std::span<const double> y_grid, const LrgOptions& opts) {
  if (!op.is_square()) throw Error(ErrorKind::dimension_mismatch, "LRG scan needs a square operator");
  for (double y : y_grid) {
    if (!(y > 0.0) || !std::isfinite(y)) throw Error(ErrorKind::invalid_argument, "y grid must be positive");
  }
  std::vector<LrgPoint> pts(y_grid.size());
  parallel_for(y_grid.size(), opts.threads, [&](std::size_t k) {
    const double y = y_grid[k];
    const double norm = resolvent_norm(shifted(op, cplx{0.0, y}));
    pts[k] = {y, norm, y * norm};
  });
  return finish_scan(std::move(pts), opts);
}

LrgScan lrg_scan(const BlockCoefficients& c, std::span<const double> y_grid, const LrgOptions& opts) {
  return lrg_scan_matrix(assemble_jsa(c), y_grid, opts);
}

TNecessaryTable lrg_necessary_T(const BlockCoefficients& c, std::span<const cplx> z_grid, double K_report) {
  const LuFactor a_lu = factor_A(c);
  TNecessaryTable table;
  table.K_report = K_report;
  for (const cplx z : z_grid) {
    if (z.imag() == 0.0) throw Error(ErrorKind::invalid_argument, "z must be off the real axis");
    const LuFactor t_lu(schur_T(c, z));
    if (t_lu.below_floor()) {
      throw Error(ErrorKind::t_singular, "T(z) is singular at z = (" + std::to_string(z.real()) + ", " +
                                             std::to_string(z.imag()) + ")");
    }
    const CMatrix t_inv = t_lu.inverse();
    TNecessaryRow row;
    row.z = z;
    row.t_inv_norm = spectral_norm(t_inv);
    row.a_inv_t_inv_norm = spectral_norm(a_lu.solve(t_inv));
    row.bound_t = row.t_inv_norm * std::abs(z.imag());
    row.bound_at = row.a_inv_t_inv_norm * std::abs(z) * std::abs(z.imag());
    table.K_observed = std::max({table.K_observed, row.bound_t, row.bound_at});
    table.rows.push_back(row);
  }
  table.below_K = table.K_observed <= K_report;
  return table;
}

DetRatioCheck det_ratio_check(const BlockCoefficients& c, std::span<const cplx> zs) {
  const CMatrix l = assemble_jsa(c);
  const cplx det_a = determinant(c.A);
  const double sign = (c.n() % 2 == 0) ? 1.0 : -1.0;
  DetRatioCheck out;
  for (const cplx z : zs) {
    const cplx lhs = determinant(shifted(l, z));
    const cplx rhs = sign * determinant(schur_T(c, z)) * det_a;
    out.ratios.push_back(lhs / rhs);
  }
  if (!out.ratios.empty()) {
    for (const cplx r : out.ratios) {
      out.max_deviation = std::max(out.max_deviation, std::abs(r - out.ratios.front()) / std::abs(out.ratios.front()));
    }
  }
  return out;
}

SpectralReport spectral_report(const BlockCoefficients& c, std::span<const double> y_grid,
                               const SpectralReportOptions& opts) {
  validate(c);
  SpectralReport r;
  const auto direct = spectrum_L_direct(c);
  r.eigenvalues_L = direct.values;
  r.residuals_L = direct.residuals;
  r.eigenvectors_L = direct.vectors;
  r.eigenvalues_A_cal = hermitian_eigenvalues(assemble_selfadjoint(c));
  r.kappa_Acal = inertia_from_eigenvalues(r.eigenvalues_A_cal, opts.inertia_tol);
  r.kappa_A = inertia(c.A, opts.inertia_tol);
  r.kappa_S0 = inertia(schur_S(c, 0.0), opts.inertia_tol);

  const auto sym = spectral_symmetry_check(r.eigenvalues_L, opts.pair_tol);
  r.nonreal_pairs = sym.pairs;
  r.verdicts["conjugation_symmetric"] = sym.symmetric;
  r.verdict_sources["conjugation_symmetric"] = {"spectral_symmetry_check", opts.pair_tol};

  const bool degenerate = r.kappa_Acal.n_zero + r.kappa_A.n_zero + r.kappa_S0.n_zero > 0;
  if (!degenerate) {
    r.verdicts["kappa_additivity"] = r.kappa_Acal.n_neg == r.kappa_A.n_neg + r.kappa_S0.n_neg;
    r.verdict_sources["kappa_additivity"] = {"kappa_decomposition", opts.inertia_tol};
  }

  std::size_t nonreal = 0;
  double max_im = 0.0;
  for (const cplx z : r.eigenvalues_L) {
    max_im = std::max(max_im, std::abs(z.imag()));
    if (std::abs(z.imag()) > opts.real_tol) ++nonreal;
  }
  r.verdicts["nonreal_bound"] = nonreal <= 2 * r.kappa_Acal.n_neg;
  r.verdict_sources["nonreal_bound"] = {"nonreal_count_bound", opts.real_tol};
  if (r.kappa_Acal.n_neg == 0) {
    r.verdicts["real_spectrum"] = max_im <= opts.real_tol;
    r.verdict_sources["real_spectrum"] = {"spectrum_L_direct", opts.real_tol};
  }

  if (!y_grid.empty()) {
    r.lrg = lrg_scan(c, y_grid, opts.lrg);
    r.verdicts["lrg_violated"] = r.lrg.verdict == LrgVerdict::violated;
    r.verdict_sources["lrg_violated"] = {"lrg_scan", opts.lrg.growth_factor};
    r.verdicts["lrg_consistent_on_grid"] = r.lrg.verdict == LrgVerdict::consistent_on_grid;
    r.verdict_sources["lrg_consistent_on_grid"] = {"lrg_scan", opts.lrg.K_report};
  }
  return r;
}

}  // namespace blockspec
