#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "../support/generators.hpp"
#include "blockspec/linalg.hpp"
#include "blockspec/parallel.hpp"
#include "blockspec/polynomial.hpp"

using namespace blockspec;

namespace {

const cplx I{0.0, 1.0};

std::vector<double> sorted_real(std::vector<cplx> v) {
  std::vector<double> out;
  for (cplx z : v) out.push_back(z.real());
  std::sort(out.begin(), out.end());
  return out;
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) { return (a - b).max_abs(); }

}  // namespace

TEST_SUITE("core-numerics") {

TEST_CASE("hermitian eigenvalues of small fixed matrices") {
  const auto d = hermitian_eigenvalues(CMatrix::diagonal(std::vector<double>{2.0, -1.0, 0.0}));
  REQUIRE(d.size() == 3);
  CHECK(d[0] == doctest::Approx(-1.0));
  CHECK(d[1] == doctest::Approx(0.0));
  CHECK(d[2] == doctest::Approx(2.0));

  const auto p = hermitian_eigenvalues(CMatrix::from_rows({{0.0, I}, {-I, 0.0}}));
  CHECK(p[0] == doctest::Approx(-1.0));
  CHECK(p[1] == doctest::Approx(1.0));
}

TEST_CASE("hermitian eigenvalues agree with characteristic-polynomial roots") {
  // Characteristic polynomial by Faddeev-LeVerrier, roots by the companion matrix.
  gen::for_all(5, 11, [](Rng& rng, std::size_t) {
    const std::size_t n = 8;
    const CMatrix h = random_hermitian(rng, n);
    std::vector<cplx> coeff(n + 1);
    coeff[n] = 1.0;
    CMatrix m = CMatrix::identity(n);
    CMatrix mk(n, n);
    for (std::size_t k = 1; k <= n; ++k) {
      mk = h * m;
      cplx tr = 0.0;
      for (std::size_t i = 0; i < n; ++i) tr += mk(i, i);
      coeff[n - k] = -tr / static_cast<double>(k);
      m = add_identity(mk, coeff[n - k]);
    }
    const Poly p(coeff);
    const auto roots = p.real_roots(1e-6);
    const auto eig = hermitian_eigenvalues(h);
    REQUIRE(roots.size() == n);
    for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(roots[k] - eig[k]) <= 1e-9 * std::max(1.0, std::abs(eig[k])));
  });
}

TEST_CASE("non-Hermitian input is rejected") {
  CHECK_THROWS_AS(hermitian_eigenvalues(CMatrix::from_rows({{1.0, 2.0}, {0.0, 1.0}})), Error);
}

TEST_CASE("general eigenvalues") {
  const auto e = sorted_real(eigenvalues(CMatrix::from_rows({{0.0, I}, {-4.0 * I, 0.0}})));
  CHECK(e[0] == doctest::Approx(-2.0));
  CHECK(e[1] == doctest::Approx(2.0));

  for (cplx z : eigenvalues(CMatrix::identity(3))) CHECK(std::abs(z - 1.0) < 1e-14);

  const auto jordan = general_eig(CMatrix::from_rows({{1.0, 1.0}, {0.0, 1.0}}), true, true);
  for (cplx z : jordan.values) CHECK(std::abs(z - 1.0) < 1e-7);
  CHECK(jordan.defective);
}

TEST_CASE("general eigen residuals stay small on random matrices") {
  gen::for_all(20, 12, [](Rng& rng, std::size_t) {
    const std::size_t n = gen::size_in(rng, 1, 12);
    const auto e = general_eig(random_complex(rng, n, n));
    for (double r : e.residuals) CHECK(r <= LinalgTolerances::eig_residual);
  });
}

TEST_CASE("spectral norm") {
  CHECK(spectral_norm(CMatrix::diagonal(std::vector<double>{3.0, -5.0})) == doctest::Approx(5.0));
  CHECK(spectral_norm(CMatrix::from_rows({{0.0, I}, {-4.0 * I, 0.0}})) == doctest::Approx(4.0));
  Rng rng(3);
  CHECK(std::abs(spectral_norm(random_unitary(rng, 7)) - 1.0) <= 1e-10);
}

TEST_CASE("solve") {
  const auto half = solve(2.0 * CMatrix::identity(3), CMatrix::identity(3)).x;
  CHECK(max_abs_diff(half, 0.5 * CMatrix::identity(3)) < 1e-15);

  const CMatrix u = CMatrix::from_rows({{1.0, 1.0}, {0.0, 1.0}});
  const auto x = solve(u, CMatrix(2, 1, {1.0, 1.0})).x;
  CHECK(std::abs(x(0, 0)) < 1e-15);
  CHECK(std::abs(x(1, 0) - 1.0) < 1e-15);

  try {
    solve(CMatrix::from_rows({{1.0, 2.0}, {2.0, 4.0}}), CMatrix::identity(2));
    FAIL("expected SingularMatrix");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::singular_matrix);
  }
}

TEST_CASE("solve then multiply reproduces the right-hand side") {
  gen::for_all(20, 13, [](Rng& rng, std::size_t) {
    const std::size_t n = gen::size_in(rng, 1, 20);
    const CMatrix m = add_identity(random_complex(rng, n, n), 3.0);
    const CMatrix rhs = random_complex(rng, n, 3);
    const auto s = solve(m, rhs);
    CHECK((m * s.x - rhs).frobenius_norm() <= LinalgTolerances::solve_residual * rhs.frobenius_norm());
  });
}

TEST_CASE("inertia") {
  const auto a = inertia(CMatrix::diagonal(std::vector<double>{-2.0, 0.0, 3.0}), 1e-12);
  CHECK(a.n_neg == 1);
  CHECK(a.n_zero == 1);
  CHECK(a.n_pos == 1);

  const auto b = inertia(CMatrix::diagonal(std::vector<double>{1e-15, 1.0}), 1e-12);
  CHECK(b.n_neg == 0);
  CHECK(b.n_zero == 1);
  CHECK(b.n_pos == 1);
}

TEST_CASE("inertia counts match the eigenvalue signs") {
  gen::for_all(10, 14, [](Rng& rng, std::size_t) {
    const std::size_t n = 8;
    const CMatrix q = random_unitary(rng, n);
    std::vector<double> d(n);
    for (std::size_t k = 0; k < n; ++k) d[k] = (k < 3 ? -1.0 : 1.0) * gen::uniform(rng, 0.5, 2.0);
    CMatrix a = q * CMatrix::diagonal(d) * q.adjoint();
    a = 0.5 * (a + a.adjoint());
    const auto in = inertia(a, 1e-10);
    const auto eig = hermitian_eigenvalues(a);
    CHECK(in.n_neg == 3);
    CHECK(static_cast<std::size_t>(std::count_if(eig.begin(), eig.end(), [](double v) { return v < 0; })) == in.n_neg);
  });
}

TEST_CASE("determinant and LU") {
  CHECK(std::abs(determinant(CMatrix::from_rows({{1.0, 2.0}, {3.0, 4.0}})) - cplx(-2.0)) < 1e-14);
  LuFactor lu(CMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}}));
  CHECK(std::abs(lu.determinant() + 1.0) < 1e-15);
  CHECK(lu.rcond() == doctest::Approx(1.0));
}

TEST_CASE("matrix algebra") {
  const CMatrix a = CMatrix::from_rows({{1.0, I}, {2.0, 3.0}});
  CHECK(a.adjoint()(0, 1) == cplx(2.0));
  CHECK(a.adjoint()(1, 0) == -I);
  CHECK(a.hermitian_defect() > 0.0);
  const CMatrix blk = CMatrix::block2x2(a, a, a, a);
  CHECK(blk.rows() == 4);
  CHECK(blk(3, 3) == cplx(3.0));
  CHECK(max_abs_diff(a * CMatrix::identity(2), a) == 0.0);
  CHECK_THROWS_AS(CMatrix(2, 2, {1.0, 2.0, 3.0}), Error);
  CHECK_THROWS_AS(CMatrix(1, 1, {cplx(NAN, 0.0)}), Error);
}

TEST_CASE("parallel_for covers every index and rethrows") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) {
                    if (i == 7) throw Error(ErrorKind::invalid_argument, "boom");
                  }),
                  Error);
}

TEST_CASE("polynomial arithmetic and real roots") {
  const Poly p({-1.0, 0.0, 1.0});  // x^2 - 1
  const auto r = p.real_roots();
  REQUIRE(r.size() == 2);
  CHECK(r[0] == doctest::Approx(-1.0));
  CHECK(r[1] == doctest::Approx(1.0));
  const Poly q = p * p;
  CHECK(q.degree() == 4);
  CHECK(std::abs(q(2.0) - cplx(9.0)) < 1e-14);
  CHECK((p - p).is_zero());
}

TEST_CASE("error kinds map to exit classes") {
  CHECK(is_numerical(ErrorKind::singular_hv));
  CHECK(is_numerical(ErrorKind::resolvent_singular));
  CHECK_FALSE(is_numerical(ErrorKind::validation_error));
  CHECK_FALSE(is_numerical(ErrorKind::parse_error));
  CHECK(std::string(Error(ErrorKind::singular_a, "x").what()).rfind("SingularA", 0) == 0);
}

}  // TEST_SUITE
