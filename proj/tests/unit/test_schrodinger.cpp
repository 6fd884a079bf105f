#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "../support/generators.hpp"
#include "blockspec/schrodinger.hpp"

using namespace blockspec;

namespace {

const cplx I{0.0, 1.0};

std::size_t negatives(const CMatrix& m) {
  const auto e = hermitian_eigenvalues(m);
  return static_cast<std::size_t>(std::count_if(e.begin(), e.end(), [](double v) { return v < 0; }));
}

// Bound states of -f'' + (m^2 - d 1_{|x|<w/2}) f below zero energy, from the
// continuous matching conditions in E (sign changes on a fine scan).
std::size_t square_well_negative_states(double m, double d, double w) {
  const double a = w / 2.0;
  auto even = [&](double e) {
    const double k = std::sqrt(d - m * m + e), q = std::sqrt(m * m - e);
    return k * std::sin(k * a) - q * std::cos(k * a);
  };
  auto odd = [&](double e) {
    const double k = std::sqrt(d - m * m + e), q = std::sqrt(m * m - e);
    return k * std::cos(k * a) + q * std::sin(k * a);
  };
  const double lo = m * m - d;
  const int steps = 200000;
  std::size_t count = 0;
  double pe = even(lo), po = odd(lo + 1e-12);
  for (int s = 1; s < steps; ++s) {
    const double e = lo + (0.0 - lo) * s / steps;
    const double ve = even(e), vo = odd(e);
    if ((ve > 0) != (pe > 0)) ++count;
    if ((vo > 0) != (po > 0)) ++count;
    pe = ve;
    po = vo;
  }
  return count;
}

// Depth at which -kappa f'' + (m^2 - d) f on a well of width w acquires a
// zero-energy even state: k tan(k w/2) = m / sqrt(kappa), d = m^2 + kappa k^2.
double well_threshold(double kappa, double m, double w) {
  const double q = m / std::sqrt(kappa);
  double lo = 0.0, hi = M_PI / w * (1.0 - 1e-15);
  for (int it = 0; it < 200; ++it) {
    const double k = 0.5 * (lo + hi);
    (k * std::tan(k * w / 2.0) < q ? lo : hi) = k;
  }
  const double k = 0.5 * (lo + hi);
  return m * m + kappa * k * k;
}

}  // namespace

TEST_SUITE("schrodinger-block") {

TEST_CASE("grid and potentials") {
  const Grid1D g{1.0, 5};
  CHECK(g.spacing() == doctest::Approx(0.5));
  CHECK(g.unknowns() == 3);
  CHECK(g.x(0) == doctest::Approx(-0.5));
  CHECK_THROWS_AS((Grid1D{1.0, 2}).validate(), Error);
  CHECK_THROWS_AS((Grid1D{0.0, 10}).validate(), Error);

  const auto w = Potential::square_well(3.0, 2.0);
  CHECK(w(0.5) == -3.0);
  CHECK(w(1.5) == 0.0);
  CHECK(Potential::gaussian(2.0, 1.0)(0.0) == 2.0);
  CHECK(Potential::samples({0.0, 2.0}, {0.0, 4.0})(1.0) == doctest::Approx(2.0));
  CHECK(Potential::samples({0.0, 2.0}, {0.0, 4.0})(3.0) == 0.0);

  CHECK_NOTHROW(check_potential_decay({20.0, 201}, Potential::square_well(1.0, 2.0)));
  try {
    check_potential_decay({20.0, 201}, Potential::square_well(1.0, 39.0));
    FAIL("expected InvalidPotential");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_potential);
  }
}

TEST_CASE("potential CSV") {
  const auto dir = std::filesystem::temp_directory_path() / "blockspec_unit_pot";
  std::filesystem::create_directories(dir);
  const auto good = dir / "good.csv";
  std::ofstream(good) << "x,V\n# comment\n-1,0\n0,-2\n1,0\n";
  const auto p = Potential::from_csv(good.string());
  CHECK(p(0.0) == -2.0);
  CHECK(p(0.5) == doctest::Approx(-1.0));

  const auto bad = dir / "bad.csv";
  std::ofstream(bad) << "0,1\n1,oops\n";
  try {
    Potential::from_csv(bad.string());
    FAIL("expected InvalidPotential");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_potential);
    CHECK(std::string(e.what()).find(":2:") != std::string::npos);
  }
  try {
    Potential::from_csv((dir / "missing.csv").string());
    FAIL("expected IoError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::io_error);
  }
}

TEST_CASE("free H_V eigenvalues follow the Dirichlet closed form") {
  const Grid1D g{10.0, 401};
  const double m = 1.0, h = g.spacing(), len = 2.0 * g.half_length;
  const CMatrix hv = discretize_HV(g, m, Potential::zero());
  CHECK(hv.hermitian_defect() == 0.0);
  const auto e = hermitian_eigenvalues(hv);
  for (int j = 1; j <= 5; ++j) {
    const double kj = j * M_PI / len;
    const double exact = m * m + kj * kj;
    CAPTURE(j);
    CHECK(std::abs(e[j - 1] - exact) <= std::pow(kj, 4) * h * h / 12.0 * 1.01 + 1e-10);
  }
}

TEST_CASE("Weyl bound for H_V") {
  gen::for_all(10, 51, [](Rng& rng, std::size_t) {
    const double depth = gen::uniform(rng, 0.0, 4.0);
    const auto v = Potential::square_well(depth, gen::uniform(rng, 0.5, 4.0));
    const auto e = hermitian_eigenvalues(discretize_HV({10.0, 201}, 1.0, v));
    CHECK(e.front() >= 1.0 - depth - 1e-12);
  });
}

TEST_CASE("square-well bound states match the transcendental count") {
  const double m = 1.0, d = 5.0, w = 2.0;
  const std::size_t oracle = square_well_negative_states(m, d, w);
  const CMatrix hv = discretize_HV({20.0, 801}, m, Potential::square_well(d, w));
  CHECK(oracle == 1);
  CHECK(negatives(hv) == oracle);
  CHECK(negatives(discretize_HV({20.0, 801}, m, Potential::square_well(12.0, 3.0))) ==
        square_well_negative_states(m, 12.0, 3.0));
}

TEST_CASE("derivative matrix") {
  const Grid1D g{3.0, 601};
  const CMatrix D = discretize_D(g);
  CHECK((D + D.transpose()).max_abs() == 0.0);
  const auto xs = g.interior_nodes();
  std::vector<cplx> f(xs.size()), ones(xs.size(), 1.0);
  for (std::size_t k = 0; k < xs.size(); ++k) f[k] = std::sin(xs[k]);
  const auto df = D * std::span<const cplx>(f);
  const auto d1 = D * std::span<const cplx>(ones);
  double err = 0.0, cst = 0.0;
  for (std::size_t k = 1; k + 1 < xs.size(); ++k) {
    err = std::max(err, std::abs(df[k] - std::cos(xs[k])));
    cst = std::max(cst, std::abs(d1[k]));
  }
  const double h = g.spacing();
  CHECK(err <= h * h / 6.0 * 1.01);
  CHECK(cst == 0.0);
}

TEST_CASE("assembly") {
  try {
    assemble_gl({20.0, 101}, 1.0, 0.0, Potential::zero());
    FAIL("expected NuOutOfRange");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::nu_out_of_range);
  }
  CHECK_THROWS_AS(assemble_gl({20.0, 101}, 1.0, 1.0, Potential::zero()), Error);

  const auto d = assemble_gl({20.0, 101}, 1.0, 0.5, Potential::zero());
  CHECK(d.kappa_HV.n_neg == 0);
  CHECK(assemble_selfadjoint(d.coeffs).hermitian_defect() == 0.0);

  const auto deep = assemble_gl({20.0, 201}, 1.0, 0.5, Potential::square_well(12.0, 3.0));
  CHECK(deep.kappa_HV.n_neg == negatives(deep.H_V));
  CHECK(deep.kappa_HV.n_neg >= 2);
}

TEST_CASE("Schur complements agree with the generic block routines") {
  const auto d = assemble_gl({15.0, 151}, 1.0, 0.6, Potential::square_well(0.5, 2.0));
  const CMatrix s0 = schur_S0_gl(d);
  CHECK((s0 - schur_S(d.coeffs, 0.0)).max_abs() <= 1e-12);
  CHECK(s0.hermitian_defect() <= 1e-12);
  for (cplx z : {cplx(0.0), cplx(0.3, 1.0), cplx(0.0, 5.0)}) {
    CHECK((T_gl(d, z) - schur_T(d.coeffs, z)).max_abs() <= 1e-12 * (1.0 + std::norm(z)));
  }
  CHECK((T_gl(d, 0.0) - s0).max_abs() <= 1e-13);

  const auto tiny = assemble_gl({15.0, 151}, 1.0, 1e-6, Potential::zero());
  CHECK((schur_S0_gl(tiny) - CMatrix::identity(tiny.grid.unknowns())).max_abs() <= 1e-10);
  const cplx z{0.2, 0.7};
  const CMatrix approx = CMatrix::identity(tiny.grid.unknowns()) - (z * z) * inverse(tiny.H_V);
  CHECK((T_gl(tiny, z) - approx).max_abs() <= 1e-4);
}

TEST_CASE("S(0) spectrum clusters in [1 - nu^2, 1]") {
  const double nu = 0.5;
  const auto d = assemble_gl({40.0, 800}, 1.0, nu, Potential::zero());
  const auto e = hermitian_eigenvalues(schur_S0_gl(d));
  CHECK(e.front() >= 1.0 - nu * nu - 0.02);
  CHECK(e.back() <= 1.0 + 0.02);
  CHECK(inertia(schur_S0_gl(d), 1e-10).n_neg == 0);
}

TEST_CASE("factorization identity") {
  const auto d = assemble_gl({20.0, 400}, 1.0, 0.5, Potential::zero());
  CHECK(factorization_identity_check(d, 3.0) <= 1e-10);
  const auto flipped = assemble_gl({20.0, 400}, 1.0, -0.5, Potential::zero());
  CHECK(factorization_identity_check(flipped, 3.0) <= 1e-10);
  const auto small = assemble_gl({10.0, 151}, 1.0, 0.7, Potential::square_well(0.8, 2.0));
  for (double y : {0.5, 1.0, 3.0, 10.0, 50.0}) CHECK(factorization_identity_check(small, y) <= 1e-9);
  CHECK_THROWS_AS(factorization_identity_check(small, 0.0), Error);
}

TEST_CASE("free Green's function") {
  const auto g = greens_check({30.0, 1200}, 1.0);
  CHECK(std::abs(g.center_value - 0.5) <= 1e-3);
  CHECK(g.decay_ratio == doctest::Approx(g.decay_expected).epsilon(1e-2));
  CHECK(g.decay_expected == doctest::Approx(std::exp(-5.0)).epsilon(0.05));
  // LU-based inversion leaves rounding-level asymmetry.
  CHECK(g.symmetry_defect <= 1e-14);
  CHECK(g.normwise_rel <= 1e-3);
}

TEST_CASE("positivity equivalence") {
  const Grid1D g{20.0, 401};
  const auto z = positivity_equivalence(g, 1.0, 0.6, Potential::zero(), 1e-10);
  CHECK(z.Acal_nonneg);
  CHECK(z.HV_nonneg);
  CHECK(z.HnuV_nonneg);
  CHECK(z.equivalent);

  // Between the two thresholds the scaled operator binds but H_V does not.
  const double w = 2.0, nu = 0.6;
  const double d = 0.5 * (well_threshold(1.0 - nu * nu, 1.0, w) + well_threshold(1.0, 1.0, w));
  const auto mid = positivity_equivalence(g, 1.0, nu, Potential::square_well(d, w), 1e-10);
  CHECK(mid.HV_nonneg);
  CHECK_FALSE(mid.HnuV_nonneg);
  CHECK_FALSE(mid.Acal_nonneg);
  CHECK(mid.equivalent);
}

TEST_CASE("coarse spectrum report") {
  const auto d = assemble_gl({20.0, 201}, 1.0, 0.6, Potential::zero());
  GLReportOptions o;
  o.y_grid = {1.0, 10.0};
  const auto r = gl_spectrum_report(d, o);
  CHECK(r.kappa.has_value());
  CHECK(r.kappa->consistent);
  CHECK(r.max_abs_im <= 1e-8);
  CHECK(r.min_abs_re >= 0.8 - o.band_tol);
  CHECK(spectral_symmetry_check(r.report.eigenvalues_L).symmetric);
  CHECK(r.gap_point_smin > 0.0);
}

}  // TEST_SUITE
