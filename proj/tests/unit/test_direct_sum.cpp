#include <doctest.h>

#include <cmath>

#include "../support/generators.hpp"
#include "blockspec/direct_sum.hpp"

using namespace blockspec;

namespace {

const cplx I{0.0, 1.0};

std::vector<double> range(int lo, int hi) {
  std::vector<double> w;
  for (int a = lo; a <= hi; ++a) w.push_back(a);
  return w;
}

}  // namespace

TEST_SUITE("direct-sum-models") {

TEST_CASE("model blocks") {
  CHECK(model_block(1.0, BRule::identity) == CMatrix::from_rows({{0.0, I}, {-I, 0.0}}));
  for (double n : {2.0, 7.0, 50.0}) {
    const CMatrix b = model_block(n, BRule::inverse);
    CHECK((b * b - CMatrix::identity(2)).max_abs() < 1e-14);
  }
  const auto e = block_eigendata(4.0, BRule::identity);
  CHECK(std::abs(e.values[0] - 2.0) < 1e-12);
  CHECK(std::abs(e.values[1] + 2.0) < 1e-12);
  try {
    model_block(0.0, BRule::identity);
    FAIL("expected NonPositiveWeight");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::non_positive_weight);
  }
}

TEST_CASE("identity-rule blocks square to a I") {
  gen::for_all(100, 41, [](Rng& rng, std::size_t) {
    const double a = std::exp(gen::uniform(rng, std::log(1e-2), std::log(1e6)));
    const CMatrix b = model_block(a, BRule::identity);
    CHECK((b * b - a * CMatrix::identity(2)).max_abs() == 0.0);
    const auto ev = eigenvalues(b);
    for (cplx v : ev) CHECK(std::abs(std::abs(v) - std::sqrt(a)) <= 1e-12 * std::max(1.0, std::sqrt(a)));
  });
}

TEST_CASE("eigenvector angle") {
  CHECK(block_eigendata(1.0, BRule::identity).cos_angle == doctest::Approx(0.0));
  CHECK(block_eigendata(100.0, BRule::identity).cos_angle == doctest::Approx(99.0 / 101.0));
  for (double a : {0.3, 3.0, 1e4}) {
    const auto d = block_eigendata(a, BRule::identity);
    const CMatrix b = model_block(a, BRule::identity);
    for (std::size_t k = 0; k < 2; ++k) {
      const auto v = d.vectors.column(k);
      const auto bv = b * std::span<const cplx>(v);
      std::vector<cplx> r(2);
      for (int i = 0; i < 2; ++i) r[i] = bv[i] - d.values[k] * v[i];
      CHECK(norm2(r) <= 1e-12 * std::max(1.0, std::sqrt(a)));
    }
  }
}

TEST_CASE("projector norms") {
  CHECK(projector_norm(1.0, BRule::identity) == doctest::Approx(1.0));
  CHECK(projector_norm(100.0, BRule::identity) == doctest::Approx(5.05));
  CHECK(projector_norm(4.0, BRule::identity) == doctest::Approx(1.25));

  gen::for_all(200, 42, [](Rng& rng, std::size_t) {
    const double a = std::exp(gen::uniform(rng, std::log(1e-2), std::log(1e6)));
    CAPTURE(a);
    const double closed = (a + 1.0) / (2.0 * std::sqrt(a));
    CHECK(std::abs(projector_norm(a, BRule::identity) - closed) <= 1e-10 * closed);

    const CMatrix pp = riesz_projector(a, BRule::identity, true);
    const CMatrix pm = riesz_projector(a, BRule::identity, false);
    const double scale = std::max(1.0, pp.max_abs() * pp.max_abs());
    CHECK((pp * pp - pp).max_abs() <= 1e-10 * scale);
    CHECK((pp + pm - CMatrix::identity(2)).max_abs() <= 1e-10 * scale);
    CHECK((pp * pm).max_abs() <= 1e-10 * scale);
  });
}

TEST_CASE("projector norm grows monotonically for a >= 1") {
  double prev = 0.0;
  for (double a = 1.0; a <= 1e6; a *= 1.5) {
    const double p = projector_norm(a, BRule::identity);
    CHECK(p >= prev);
    prev = p;
  }
  CHECK(prev > 400.0);
}

TEST_CASE("J-positivity of the identity-rule model") {
  gen::for_all(20, 43, [](Rng& rng, std::size_t) {
    DiagonalModel m{gen::increasing_weights(rng, gen::size_in(rng, 1, 10), 1e-2, 1e3), BRule::identity};
    const auto c = m.coefficients();
    const CMatrix jl = fundamental_symmetry(c.n()) * assemble_jsa(c);
    CHECK(jl.hermitian_defect() <= 1e-14);
    CHECK(hermitian_eigenvalues(jl).front() > 0.0);
  });
}

TEST_CASE("projector growth scan") {
  const auto g = projector_growth_scan({{1.0, 4.0, 100.0}, BRule::identity});
  CHECK(g.norms[0] == doctest::Approx(1.0));
  CHECK(g.norms[1] == doctest::Approx(1.25));
  CHECK(g.norms[2] == doctest::Approx(5.05));
  CHECK(g.monotone);

  const auto flat = projector_growth_scan({{1.0, 1.0, 1.0}, BRule::identity});
  for (double v : flat.norms) CHECK(v == doctest::Approx(1.0));
  CHECK_FALSE(flat.singular_critical_point_evidence);

  const auto big = projector_growth_scan({range(1, 1000), BRule::identity});
  CHECK(std::abs(big.exponent - 0.5) <= 0.02);
  CHECK(big.singular_critical_point_evidence);
}

TEST_CASE("T inverse norm scan") {
  const auto s = t_inverse_norm_scan({range(1, 1000), BRule::identity}, I);
  CHECK(s.last == doctest::Approx(1000.0 / 1001.0));
  CHECK(s.nondecreasing);
  CHECK(t_inverse_norm_scan({range(1, 50), BRule::identity}, 0.5).last == doctest::Approx(4.0 / 3.0));
  CHECK(t_inverse_norm_scan({{1.0}, BRule::identity}, I).last == doctest::Approx(0.5));
  try {
    t_inverse_norm_scan({range(1, 5), BRule::identity}, 2.0);
    FAIL("expected ZSquaredInSpectrum");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::z_squared_in_spectrum);
  }
}

TEST_CASE("definitizability probe") {
  const auto p10 = definitizability_probe({range(1, 10), BRule::inverse});
  CHECK(p10.scan.last == doctest::Approx(2.0));
  const auto p100 = definitizability_probe({range(1, 100), BRule::inverse});
  CHECK(p100.scan.last == doctest::Approx(20.0));
  CHECK(p100.t_at_plus_one == 0.0);
  CHECK(p100.t_at_minus_one == 0.0);
  CHECK(p100.linear_fit_error <= 1e-12);
  CHECK(p100.resolvent_empty_in_limit);
  try {
    definitizability_probe({range(1, 10), BRule::identity});
    FAIL("expected WrongRule");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::wrong_rule);
  }
}

}  // TEST_SUITE
