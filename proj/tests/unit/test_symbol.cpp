#include <doctest.h>

#include <cmath>

#include "../support/generators.hpp"
#include "blockspec/symbol.hpp"

using namespace blockspec;

namespace {

const cplx I{0.0, 1.0};

Rational constant(cplx v) { return Rational(Poly::constant(v)); }

SymbolTriple unit_symbol() { return SymbolTriple::closed_form(constant(1.0), constant(1.0), Rational{}, "unit"); }

}  // namespace

TEST_SUITE("symbol-calculus") {

TEST_CASE("symbol matrix") {
  CHECK(symbol_matrix_A(gl_symbol({1.0, 0.0}), 2.0) == CMatrix::from_rows({{5.0, 0.0}, {0.0, 1.0}}));
  CHECK(symbol_matrix_A(gl_symbol({1.0, 0.5}), 0.0) == CMatrix::identity(2));
  const CMatrix real = symbol_matrix_A(gl_symbol({2.0, 0.6}, SymbolGauge::real), 1.0);
  CHECK((real - CMatrix::from_rows({{5.0, 0.6}, {0.6, 1.0}})).max_abs() < 1e-15);
  // The Fourier gauge differs by conjugation with diag(1, i).
  const CMatrix four = symbol_matrix_A(gl_symbol({2.0, 0.6}), 1.0);
  const CMatrix u = CMatrix::diagonal(std::vector<cplx>{1.0, I});
  CHECK((u * four * u.adjoint() - real).max_abs() < 1e-15);
  CHECK(four.hermitian_defect() == 0.0);
}

TEST_CASE("parameter validation and domain") {
  CHECK_THROWS_AS(GLSymbolParams({1.0, 1.0}).validate(), Error);
  CHECK_THROWS_AS(GLSymbolParams({0.0, 0.5}).validate(), Error);
  CHECK_NOTHROW(GLSymbolParams({1.0, 0.0}).validate());
  const auto s = SymbolTriple::sampled({0.0, 1.0}, {1.0, 2.0}, {1.0, 1.0}, {0.0, 0.0});
  CHECK(s.a_at(0.5) == cplx(1.5));
  try {
    s.a_at(2.0);
    FAIL("expected DomainViolation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::domain_violation);
  }
}

TEST_CASE("determinant closed form") {
  const cplx z{0.3, -0.2};
  CHECK(std::abs(symbol_det_A({1.0, 0.5}, 0.0, z) - (1.0 - z) * (1.0 - z)) < 1e-15);
  CHECK(std::abs(symbol_det_A({1.5, 0.0}, 2.0, z) - (1.0 - z) * (4.0 + 2.25 - z)) < 1e-14);
  CHECK(std::abs(symbol_det_A({2.0, 0.6}, 1.0, 0.0) - 4.64) < 1e-14);

  gen::for_all(200, 31, [](Rng& rng, std::size_t) {
    const GLSymbolParams p{gen::uniform(rng, 0.1, 3.0), gen::uniform(rng, -0.99, 0.99)};
    const double l = gen::uniform(rng, -50.0, 50.0);
    const cplx w = gen::complex_in_box(rng, 10.0);
    for (auto g : {SymbolGauge::fourier, SymbolGauge::real}) {
      const CMatrix m = symbol_matrix_A(gl_symbol(p, g), l);
      const cplx direct = (m(0, 0) - w) * (m(1, 1) - w) - m(0, 1) * m(1, 0);
      CHECK(std::abs(direct - symbol_det_A(p, l, w)) <= 1e-12 * (1.0 + std::norm(w) + l * l) * (1.0 + p.m * p.m));
    }
  });
}

TEST_CASE("essential spectrum bands") {
  const double inf = INFINITY;
  const auto b1 = ess_spectrum_bands({2.0, 0.6}).bands;
  REQUIRE(b1.size() == 2);
  CHECK(b1[0].lo == doctest::Approx(0.64));
  CHECK(b1[0].hi == doctest::Approx(1.0));
  CHECK(b1[1].lo == doctest::Approx(4.0));
  CHECK(b1[1].hi == inf);

  const auto b2 = ess_spectrum_bands({0.9, 0.6}).bands;
  CHECK(b2[0].lo == doctest::Approx(0.64));
  CHECK(b2[0].hi == doctest::Approx(0.81));
  CHECK(b2[1].lo == doctest::Approx(1.0));

  const auto b3 = ess_spectrum_bands({0.9, 0.4}).bands;
  CHECK(b3[0].lo == doctest::Approx(0.81));
  CHECK(b3[0].hi == doctest::Approx(0.84));
  CHECK(b3[1].lo == doctest::Approx(1.0));

  CHECK(BandSet::merged({{2, 3}, {0, 1}, {1, 1.5}}).bands == std::vector<Band>{{0, 1.5}, {2, 3}});
}

TEST_CASE("band membership agrees with the interval form") {
  CHECK(band_membership({2.0, 0.6}, 0.8));
  CHECK_FALSE(band_membership({2.0, 0.6}, 2.0));
  CHECK(band_membership({2.0, 0.6}, 1.0 - 0.36));

  gen::for_all(10, 32, [](Rng& rng, std::size_t) {
    const GLSymbolParams p{gen::uniform(rng, 0.3, 2.5), gen::uniform(rng, 0.05, 0.95)};
    const auto bands = ess_spectrum_bands(p);
    for (int k = 0; k < 100; ++k) {
      const double z = gen::uniform(rng, -1.0, 8.0);
      CHECK(band_membership(p, z) == bands.contains(z));
    }
  });
}

TEST_CASE("band fill by eigenvalue sweep") {
  for (GLSymbolParams p : {GLSymbolParams{2.0, 0.6}, GLSymbolParams{0.9, 0.6}, GLSymbolParams{0.9, 0.4}}) {
    const auto f = band_fill_check(p, 1e-3);
    CAPTURE(p.m);
    CAPTURE(p.nu);
    CHECK(f.ok);
    CHECK(f.max_outside <= 1e-9);
  }
}

TEST_CASE("gap of the L symbol") {
  for (double nu : {0.6, -0.3, 0.9}) {
    const auto s = spectrum_L_symbol({1.0, nu});
    CHECK(s.gap_closed_form == doctest::Approx(std::sqrt(1.0 - nu * nu)));
    CHECK(std::abs(s.gap_sweep_hi - s.gap_closed_form) <= 1e-9);
    CHECK(std::abs(s.gap_sweep_lo + s.gap_closed_form) <= 1e-9);
  }
  CHECK(spectrum_L_symbol({2.0, 0.0}).gap_closed_form == doctest::Approx(2.0));
  // +-m at l = 0 belong to the spectrum.
  const auto l0 = eigenvalues(symbol_matrix_L(gl_symbol({1.5, 0.4}), 0.0));
  for (cplx z : l0) CHECK(std::abs(std::abs(z) - 1.5) < 1e-12);
}

TEST_CASE("resolvent membership") {
  const auto grid = default_lambda_grid();
  const auto s = gl_symbol({1.0, 0.5});
  const auto r_i = resolvent_membership(s, I, grid);
  CHECK(r_i.in_resolvent);
  CHECK(r_i.sup.tail_limit == doctest::Approx(1.0 / 0.75));
  CHECK(resolvent_membership(s, 0.5, grid).in_resolvent);
  const auto r1 = resolvent_membership(s, 1.0, grid);
  CHECK_FALSE(r1.in_resolvent);
  CHECK(r1.sup.pole);
}

TEST_CASE("real spectrum criterion") {
  const auto grid = default_lambda_grid();
  CHECK(real_spectrum_criterion(gl_symbol({1.0, 0.5}), grid).holds);
  CHECK(real_spectrum_criterion(unit_symbol(), grid).holds);
  CHECK(real_spectrum_criterion(unit_symbol(), grid).sup.value == doctest::Approx(0.5));

  const Poly a({1.0, 0.0, 1.0});
  const auto divergent = SymbolTriple::closed_form(Rational(a), Rational(Poly::constant(1.0), a), Rational{});
  CHECK_FALSE(real_spectrum_criterion(divergent, grid).holds);

  const auto bad = SymbolTriple::closed_form(constant(1.0), constant(1.0), constant(2.0));
  try {
    real_spectrum_criterion(bad, grid);
    FAIL("expected PositivityViolated");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::positivity_violated);
  }
}

TEST_CASE("LRG supremum") {
  const auto grid = default_lambda_grid();
  const double nu = 0.5;
  const auto s = gl_symbol({1.0, nu});
  for (double y : {1.0, 10.0, 100.0}) {
    CAPTURE(y);
    for (auto integrand : {LrgIntegrand::full, LrgIntegrand::resolvent_entry}) {
      CHECK(lrg_sup(s, I * y, grid, integrand).value >= 1.0 / (1.0 - nu * nu) - 1e-12);
    }
  }
  const double p1 = 1.0 * lrg_sup(s, I, grid).value;
  const double p10 = 10.0 * lrg_sup(s, 10.0 * I, grid).value;
  const double p100 = 100.0 * lrg_sup(s, 100.0 * I, grid).value;
  CHECK(p1 < p10);
  CHECK(p10 < p100);

  for (double y : {0.5, 2.0, 30.0}) {
    CHECK(lrg_sup(unit_symbol(), I * y, grid).value == doctest::Approx((2.0 + y) / (1.0 + y * y)));
  }
  CHECK_THROWS_AS(lrg_sup(s, 1.0, grid), Error);

  gen::for_all(20, 33, [&](Rng& rng, std::size_t) {
    const GLSymbolParams p{gen::uniform(rng, 0.3, 2.0), gen::uniform(rng, -0.9, 0.9)};
    const cplx z{gen::uniform(rng, -3.0, 3.0), gen::uniform(rng, 0.1, 5.0)};
    const auto sym = gl_symbol(p);
    CHECK(lrg_sup(sym, z, grid).value == doctest::Approx(lrg_sup(sym, std::conj(z), grid).value).epsilon(1e-12));
  });
}

TEST_CASE("symbol resolvent matches direct inversion") {
  const CMatrix r0 = symbol_resolvent(unit_symbol(), 3.0, 0.0);
  CHECK((r0 - inverse(symbol_matrix_L(unit_symbol(), 3.0))).max_abs() < 1e-15);
  // Here L = [[0, i], [-i, 0]] squares to I, so the resolvent at 0 is L itself.
  CHECK((r0 - CMatrix::from_rows({{0.0, I}, {-I, 0.0}})).max_abs() < 1e-15);

  const auto s = gl_symbol({1.0, 0.5});
  const CMatrix ri = symbol_resolvent(s, 1.0, I);
  CHECK((ri - inverse(shifted(symbol_matrix_L(s, 1.0), I))).max_abs() < 1e-14);

  gen::for_all(200, 34, [](Rng& rng, std::size_t) {
    const GLSymbolParams p{gen::uniform(rng, 0.2, 3.0), gen::uniform(rng, -0.95, 0.95)};
    const auto sym = gl_symbol(p, rng() % 2 ? SymbolGauge::real : SymbolGauge::fourier);
    const double l = gen::uniform(rng, -20.0, 20.0);
    const cplx z{gen::uniform(rng, -5.0, 5.0), gen::uniform(rng, 0.05, 5.0)};
    const CMatrix shiftedL = shifted(symbol_matrix_L(sym, l), z);
    const CMatrix r = symbol_resolvent(sym, l, z);
    CHECK((shiftedL * r - CMatrix::identity(2)).max_abs() <= 1e-12 * (1.0 + shiftedL.max_abs() * r.max_abs()));
  });

  try {
    symbol_resolvent(gl_symbol({1.0, 0.5}), 0.0, 1.0);
    FAIL("expected SymbolSingular");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::symbol_singular);
  }
}

}  // TEST_SUITE
