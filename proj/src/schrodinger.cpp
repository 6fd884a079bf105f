#include "blockspec/schrodinger.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "blockspec/linalg.hpp"

namespace blockspec {

namespace {

constexpr cplx kI{0.0, 1.0};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& out) {
  std::istringstream is(trim(s));
  is.imbue(std::locale::classic());
  is >> out;
  return !is.fail() && is.eof();
}

Inertia checked_inertia(const CMatrix& m, double tol, const char* what) {
  const Inertia in = inertia(m, tol);
  if (in.n_zero > 0) {
    throw Error(ErrorKind::degenerate_inertia,
                std::string(what) + " has an eigenvalue within " + std::to_string(tol) + " of zero");
  }
  return in;
}

}  // namespace

void Grid1D::validate() const {
  if (!(half_length > 0.0) || !std::isfinite(half_length)) {
    throw Error(ErrorKind::invalid_argument, "grid half-length must be positive");
  }
  if (points < 3) throw Error(ErrorKind::invalid_argument, "grid needs at least 3 points");
}

std::vector<double> Grid1D::interior_nodes() const {
  std::vector<double> x(unknowns());
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = this->x(j);
  return x;
}

Potential Potential::square_well(double depth, double width) {
  if (!std::isfinite(depth) || !(width > 0.0)) {
    throw Error(ErrorKind::invalid_potential, "square well needs finite depth and positive width");
  }
  Potential p;
  p.kind = Kind::square_well;
  p.depth = depth;
  p.width = width;
  return p;
}

Potential Potential::gaussian(double amplitude, double sigma) {
  if (!std::isfinite(amplitude) || !(sigma > 0.0)) {
    throw Error(ErrorKind::invalid_potential, "gaussian needs finite amplitude and positive sigma");
  }
  Potential p;
  p.kind = Kind::gaussian;
  p.amplitude = amplitude;
  p.sigma = sigma;
  return p;
}

Potential Potential::samples(std::vector<double> xs, std::vector<double> vs) {
  if (xs.size() < 2 || xs.size() != vs.size()) {
    throw Error(ErrorKind::invalid_potential, "potential samples need >= 2 (x, V) pairs");
  }
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (!std::isfinite(xs[k]) || !std::isfinite(vs[k])) {
      throw Error(ErrorKind::invalid_potential, "potential sample is not finite");
    }
    if (k > 0 && !(xs[k] > xs[k - 1])) {
      throw Error(ErrorKind::invalid_potential, "potential abscissae must be increasing");
    }
  }
  Potential p;
  p.kind = Kind::samples;
  p.xs = std::move(xs);
  p.vs = std::move(vs);
  return p;
}

Potential Potential::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io_error, "cannot open potential file '" + path + "'");
  std::vector<double> xs;
  std::vector<double> vs;
  std::string line;
  std::size_t lineno = 0;
  bool header_allowed = true;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto comma = t.find(',');
    double x = 0.0;
    double v = 0.0;
    if (comma == std::string::npos || !parse_double(t.substr(0, comma), x) ||
        !parse_double(t.substr(comma + 1), v)) {
      if (header_allowed) {
        header_allowed = false;
        continue;
      }
      throw Error(ErrorKind::invalid_potential, path + ":" + std::to_string(lineno) + ": expected 'x, V'");
    }
    header_allowed = false;
    xs.push_back(x);
    vs.push_back(v);
  }
  return samples(std::move(xs), std::move(vs));
}

double Potential::operator()(double x) const {
  switch (kind) {
    case Kind::zero: return 0.0;
    case Kind::square_well: return std::abs(x) < 0.5 * width ? -depth : 0.0;
    case Kind::gaussian: return amplitude * std::exp(-x * x / (2.0 * sigma * sigma));
    case Kind::samples: {
      if (x < xs.front() || x > xs.back()) return 0.0;
      const auto it = std::upper_bound(xs.begin(), xs.end(), x);
      if (it == xs.end()) return vs.back();
      const auto k = static_cast<std::size_t>(it - xs.begin());
      const double t = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
      return (1.0 - t) * vs[k - 1] + t * vs[k];
    }
  }
  return 0.0;
}

std::string Potential::describe() const {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  switch (kind) {
    case Kind::zero: os << "zero"; break;
    case Kind::square_well: os << "square_well(depth=" << depth << ", width=" << width << ")"; break;
    case Kind::gaussian: os << "gaussian(amplitude=" << amplitude << ", sigma=" << sigma << ")"; break;
    case Kind::samples: os << "samples(" << xs.size() << " points)"; break;
  }
  return os.str();
}

std::vector<double> sample_potential(const Grid1D& grid, const Potential& v) {
  grid.validate();
  std::vector<double> out(grid.unknowns());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = v(grid.x(j));
  return out;
}

void check_potential_decay(const Grid1D& grid, const Potential& v) {
  const auto vals = sample_potential(grid, v);
  double vmax = 0.0;
  for (double x : vals) vmax = std::max(vmax, std::abs(x));
  if (vmax == 0.0) return;
  const double edge = 0.9 * grid.half_length;
  double outer = 0.0;
  for (std::size_t j = 0; j < vals.size(); ++j) {
    if (std::abs(grid.x(j)) >= edge) outer = std::max(outer, std::abs(vals[j]));
  }
  if (outer > 1e-6 * vmax) {
    throw Error(ErrorKind::invalid_potential, "potential does not decay: |V| = " + std::to_string(outer) +
                                                  " on the outer 10% of the grid");
  }
}

CMatrix discretize_scaled_HV(const Grid1D& grid, double kinetic, double m, const Potential& v) {
  grid.validate();
  const std::size_t n = grid.unknowns();
  const double h = grid.spacing();
  const double off = -kinetic / (h * h);
  const double diag = 2.0 * kinetic / (h * h) + m * m;
  const auto vals = sample_potential(grid, v);
  CMatrix H(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    H(j, j) = diag + vals[j];
    if (j + 1 < n) {
      H(j, j + 1) = off;
      H(j + 1, j) = off;
    }
  }
  return H;
}

CMatrix discretize_HV(const Grid1D& grid, double m, const Potential& v) {
  return discretize_scaled_HV(grid, 1.0, m, v);
}

CMatrix discretize_D(const Grid1D& grid) {
  grid.validate();
  const std::size_t n = grid.unknowns();
  const double w = 1.0 / (2.0 * grid.spacing());
  CMatrix D(n, n);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    D(j, j + 1) = w;
    D(j + 1, j) = -w;
  }
  return D;
}

GLDiscretization assemble_gl(const Grid1D& grid, double m, double nu, const Potential& v) {
  grid.validate();
  if (!(std::abs(nu) < 1.0) || nu == 0.0) {
    throw Error(ErrorKind::nu_out_of_range, "nu must lie in (-1, 1) and be nonzero; got " + std::to_string(nu));
  }
  if (!(m > 0.0)) throw Error(ErrorKind::invalid_argument, "mass m must be positive");
  check_potential_decay(grid, v);
  GLDiscretization d;
  d.grid = grid;
  d.m = m;
  d.nu = nu;
  d.potential = v;
  d.H_V = discretize_HV(grid, m, v);
  d.D = discretize_D(grid);
  const auto w = hermitian_eigenvalues(d.H_V);
  double smallest = INFINITY;
  for (double x : w) smallest = std::min(smallest, std::abs(x));
  const double scale = std::max(std::abs(w.front()), std::abs(w.back()));
  if (smallest <= 1e-10 * scale) {
    throw Error(ErrorKind::singular_hv, "H_V has an eigenvalue " + std::to_string(smallest) +
                                            " near zero; perturb the potential slightly");
  }
  d.kappa_HV = inertia_from_eigenvalues(w, 0.0);
  d.coeffs.A = d.H_V;
  d.coeffs.B = CMatrix::identity(grid.unknowns());
  d.coeffs.C = nu * d.D;
  d.coeffs.label = "gl(m=" + std::to_string(m) + ", nu=" + std::to_string(nu) + ", V=" + v.describe() + ")";
  return d;
}

CMatrix schur_S0_gl(const GLDiscretization& d) {
  LuFactor lu(d.H_V);
  if (lu.below_floor()) throw Error(ErrorKind::singular_hv, "H_V is singular");
  const double nu2 = d.nu * d.nu;
  return add_identity(nu2 * (d.D * lu.solve(d.D)), 1.0);
}

CMatrix T_gl(const GLDiscretization& d, cplx z) {
  LuFactor lu(d.H_V);
  if (lu.below_floor()) throw Error(ErrorKind::singular_hv, "H_V is singular");
  const CMatrix f = add_identity(d.nu * d.D, kI * z);
  return add_identity(f * lu.solve(f), 1.0);
}

double factorization_identity_check(const GLDiscretization& d, double y) {
  if (!(y > 0.0)) throw Error(ErrorKind::invalid_argument, "y must be positive");
  const LuFactor factor(add_identity(d.nu * d.D, -y));
  if (factor.below_floor()) throw Error(ErrorKind::singular_factor, "nu D - y is singular");
  const LuFactor h(d.H_V);
  if (h.below_floor()) throw Error(ErrorKind::singular_hv, "H_V is singular");
  const CMatrix f = factor.inverse();
  const CMatrix lhs = f * T_gl(d, cplx{0.0, y}) * f;
  const CMatrix rhs = f * f + h.inverse();
  return (lhs - rhs).frobenius_norm() / rhs.frobenius_norm();
}

GreensCheck greens_check(const Grid1D& grid, double m) {
  grid.validate();
  const CMatrix Hinv = inverse(discretize_HV(grid, m, Potential::zero()));
  const double h = grid.spacing();
  const std::size_t n = grid.unknowns();
  GreensCheck g;
  g.window = 0.5 * grid.half_length;
  g.symmetry_defect = Hinv.hermitian_defect();
  const double gmax = 1.0 / (2.0 * m);
  std::size_t i0 = 0;
  std::size_t i5 = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (std::abs(grid.x(j)) < std::abs(grid.x(i0))) i0 = j;
    if (std::abs(grid.x(j) - 5.0) < std::abs(grid.x(i5) - 5.0)) i5 = j;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(grid.x(i)) > g.window) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(grid.x(j)) > g.window) continue;
      const double exact = std::exp(-m * std::abs(grid.x(i) - grid.x(j))) / (2.0 * m);
      const double err = std::abs(Hinv(i, j).real() / h - exact);
      g.max_abs_error = std::max(g.max_abs_error, err);
      g.pointwise_rel = std::max(g.pointwise_rel, err / exact);
    }
  }
  g.normwise_rel = g.max_abs_error / gmax;
  g.constant = g.max_abs_error / (h * h + std::exp(-m * grid.half_length));
  g.center_value = Hinv(i0, i0).real() / h;
  g.decay_ratio = Hinv(i0, i5).real() / Hinv(i0, i0).real();
  g.decay_expected = std::exp(-m * std::abs(grid.x(i5) - grid.x(i0)));
  return g;
}

PositivityEquivalence positivity_equivalence(const Grid1D& grid, double m, double nu, const Potential& v,
                                             double tol) {
  if (!(std::abs(nu) < 1.0)) throw Error(ErrorKind::nu_out_of_range, "nu must lie in (-1, 1)");
  PositivityEquivalence p;
  BlockCoefficients c;
  c.A = discretize_HV(grid, m, v);
  c.B = CMatrix::identity(grid.unknowns());
  c.C = nu * discretize_D(grid);
  p.kappa_HV = checked_inertia(c.A, tol, "H_V");
  p.kappa_HnuV = checked_inertia(discretize_scaled_HV(grid, 1.0 - nu * nu, m, v), tol, "H_{nu,V}");
  p.kappa_Acal = checked_inertia(CMatrix::block2x2(c.A, c.C.adjoint(), c.C, c.B), tol, "block operator");
  p.Acal_nonneg = p.kappa_Acal.n_neg == 0;
  p.HV_nonneg = p.kappa_HV.n_neg == 0;
  p.HnuV_nonneg = p.kappa_HnuV.n_neg == 0;
  p.equivalent = p.Acal_nonneg == (p.HV_nonneg && p.HnuV_nonneg);
  return p;
}

GLSpectrumReport gl_spectrum_report(const GLDiscretization& d, const GLReportOptions& opts) {
  GLSpectrumReport out;
  SpectralReportOptions sro;
  sro.inertia_tol = opts.inertia_tol;
  sro.real_tol = opts.real_tol;
  sro.lrg = opts.lrg;
  out.report = spectral_report(d.coeffs, opts.y_grid, sro);
  auto& r = out.report;
  r.truncation = true;

  const GLSymbolParams sp{d.m, d.nu};
  out.ess_bands = ess_spectrum_bands(sp);
  out.symbol_spectrum = spectrum_L_symbol(sp);

  // The report already holds the three inertias at the same tolerance.
  if (r.kappa_Acal.n_zero + r.kappa_A.n_zero + r.kappa_S0.n_zero > 0) {
    out.kappa_error = "eigenvalue within " + std::to_string(opts.inertia_tol) +
                      " of zero; negative index is ambiguous";
  } else {
    KappaDecomposition k{r.kappa_Acal, r.kappa_A, r.kappa_S0, false};
    k.consistent = k.kappa_Acal.n_neg == k.kappa_A.n_neg + k.kappa_S0.n_neg;
    out.kappa = k;
  }

  std::vector<cplx> zs;
  for (double y : opts.y_grid) zs.emplace_back(0.0, y);
  out.t_table = lrg_necessary_T(d.coeffs, zs, opts.lrg.K_report);

  // Eigenvector localisation: mass on the outer 10% of the grid.
  const CMatrix& vecs = r.eigenvectors_L;
  const std::size_t n = d.grid.unknowns();
  const double edge = 0.9 * d.grid.half_length;
  out.boundary_artifact.assign(r.eigenvalues_L.size(), false);
  for (std::size_t k = 0; k < r.eigenvalues_L.size(); ++k) {
    double outer = 0.0;
    double total = 0.0;
    for (std::size_t j = 0; j < 2 * n; ++j) {
      const double w = std::norm(vecs(j, k));
      total += w;
      if (std::abs(d.grid.x(j % n)) >= edge) outer += w;
    }
    if (total > 0.0 && outer / total > opts.artifact_mass) {
      out.boundary_artifact[k] = true;
      ++out.artifact_count;
    }
  }

  out.min_abs_re = INFINITY;
  for (const cplx z : r.eigenvalues_L) {
    out.min_abs_re = std::min(out.min_abs_re, std::abs(z.real()));
    out.max_abs_im = std::max(out.max_abs_im, std::abs(z.imag()));
  }
  const double gap = out.symbol_spectrum.gap_closed_form;
  r.verdicts["gap_respected"] = out.min_abs_re >= gap - opts.band_tol;
  r.verdict_sources["gap_respected"] = {"spectrum_L_symbol", opts.band_tol};

  // Spot-check sigma(L) = {z : 0 in sigma(T(z))} at the eigenvalues nearest the gap.
  std::vector<cplx> nearest = r.eigenvalues_L;
  std::sort(nearest.begin(), nearest.end(), [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });
  nearest.resize(std::min(nearest.size(), opts.t_route_points));
  const TPencil pencil = make_T_pencil(d.coeffs);
  bool t_route_ok = true;
  for (const cplx z : nearest) {
    const double ratio = min_singular_value(pencil.eval(z)) / sv_zero_tol(d.coeffs, z);
    out.t_route.emplace_back(z, ratio);
    t_route_ok = t_route_ok && ratio <= 1.0;
  }
  out.gap_point_smin = min_singular_value(pencil.eval(0.0));
  r.verdicts["t_route_consistent"] = t_route_ok && out.gap_point_smin > sv_zero_tol(d.coeffs, 0.0);
  r.verdict_sources["t_route_consistent"] = {"schur_T", 1e-8};

  if (opts.full_via_T) {
    out.via_T = spectrum_L_via_T(d.coeffs, opts.region, opts.via_T);
    std::vector<cplx> direct_in;
    for (const cplx z : r.eigenvalues_L) {
      if (opts.region.contains(z)) direct_in.push_back(z);
    }
    r.verdicts["via_T_matches_direct"] = hausdorff_distance(direct_in, out.via_T->roots) <= 1e-6;
    r.verdict_sources["via_T_matches_direct"] = {"spectrum_L_via_T", 1e-6};
  }
  return out;
}

}  // namespace blockspec
