#include <doctest.h>

#include <cstdlib>
#include <cstring>

#include "../support/generators.hpp"
#include "blockspec/simd/kernels.hpp"

using namespace blockspec;
using namespace blockspec::simd;

namespace {

std::vector<double> draw(Rng& rng, std::size_t n, double lo, double hi) {
  std::vector<double> v(n);
  for (auto& x : v) x = gen::uniform(rng, lo, hi);
  return v;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

// Lengths cover empty input, pure tails and several full vectors plus a tail.
constexpr std::size_t kLengths[] = {0, 1, 2, 3, 4, 5, 7, 8, 13, 64, 1001};

}  // namespace

TEST_SUITE("simd") {

TEST_CASE("scalar table is always available") {
  CHECK(isa_compiled(Isa::scalar));
  CHECK(isa_supported(Isa::scalar));
  CHECK(kernels(Isa::scalar).isa == Isa::scalar);
  CHECK(to_string(Isa::avx2) == "avx2");
  CHECK(isa_supported(select_isa()));
}

TEST_CASE("BLOCKSPEC_SIMD override") {
  const char* old = std::getenv("BLOCKSPEC_SIMD");
  const std::string saved = old ? old : "";
  setenv("BLOCKSPEC_SIMD", "scalar", 1);
  CHECK(select_isa() == Isa::scalar);
  if (isa_supported(Isa::avx2)) {
    setenv("BLOCKSPEC_SIMD", "avx2", 1);
    CHECK(select_isa() == Isa::avx2);
  }
  if (old) setenv("BLOCKSPEC_SIMD", saved.c_str(), 1);
  else unsetenv("BLOCKSPEC_SIMD");
}

TEST_CASE("AVX2 kernels match the scalar reference bit for bit") {
  if (!isa_supported(Isa::avx2)) {
    MESSAGE("AVX2 not supported on this host; equivalence not exercised");
    CHECK_THROWS_AS(kernels(Isa::avx2), Error);
    return;
  }
  const KernelTable& s = kernels(Isa::scalar);
  const KernelTable& v = kernels(Isa::avx2);

  gen::for_all(20, 61, [&](Rng& rng, std::size_t) {
    for (std::size_t n : kLengths) {
      CAPTURE(n);
      const auto lam = draw(rng, n, -1e3, 1e3);
      const double m2 = gen::uniform(rng, 0.01, 9.0), nu = gen::uniform(rng, -0.99, 0.99);

      {
        const std::size_t nc = gen::size_in(rng, 1, 6);
        const auto cr = draw(rng, nc, -3, 3), ci = draw(rng, nc, -3, 3);
        std::vector<double> ar(n), ai(n), br(n), bi(n);
        s.poly_eval(cr.data(), ci.data(), nc, lam.data(), n, ar.data(), ai.data());
        v.poly_eval(cr.data(), ci.data(), nc, lam.data(), n, br.data(), bi.data());
        CHECK(bitwise_equal(ar, br));
        CHECK(bitwise_equal(ai, bi));
      }
      {
        const auto a_r = draw(rng, n, 0, 5), a_i = draw(rng, n, -1, 1), b_r = draw(rng, n, 0, 5),
                   b_i = draw(rng, n, -1, 1), c_r = draw(rng, n, -2, 2), c_i = draw(rng, n, -2, 2);
        const double zr = gen::uniform(rng, -3, 3), zi = gen::uniform(rng, -3, 3);
        for (double sign : {1.0, -1.0}) {
          std::vector<double> d1r(n), d1i(n), d2r(n), d2i(n);
          s.symbol_denominator(a_r.data(), a_i.data(), b_r.data(), b_i.data(), c_r.data(), c_i.data(), n, zr, zi,
                               sign, d1r.data(), d1i.data());
          v.symbol_denominator(a_r.data(), a_i.data(), b_r.data(), b_i.data(), c_r.data(), c_i.data(), n, zr, zi,
                               sign, d2r.data(), d2i.data());
          CHECK(bitwise_equal(d1r, d2r));
          CHECK(bitwise_equal(d1i, d2i));
        }
      }
      {
        auto dr = draw(rng, n, -1, 1), di = draw(rng, n, -1, 1);
        // Plant exact zeros so the near-zero skip path runs in both variants.
        for (std::size_t k = 0; k < n; k += 5) dr[k] = di[k] = 0.0;
        const auto nr = draw(rng, n, -1, 1), ni = draw(rng, n, -1, 1);
        const RatioMax r1 = s.abs_ratio_max(nr.data(), ni.data(), dr.data(), di.data(), n, 1e-12);
        const RatioMax r2 = v.abs_ratio_max(nr.data(), ni.data(), dr.data(), di.data(), n, 1e-12);
        CHECK(std::memcmp(&r1.value, &r2.value, sizeof(double)) == 0);
        CHECK(r1.index == r2.index);
        CHECK(r1.near_zero == r2.near_zero);
      }
      {
        std::vector<double> l1(n), h1(n), l2(n), h2(n);
        s.gl_symbol_eigs(lam.data(), n, m2, nu, l1.data(), h1.data());
        v.gl_symbol_eigs(lam.data(), n, m2, nu, l2.data(), h2.data());
        CHECK(bitwise_equal(l1, l2));
        CHECK(bitwise_equal(h1, h2));
        s.gl_l_branches(lam.data(), n, m2, nu, l1.data(), h1.data());
        v.gl_l_branches(lam.data(), n, m2, nu, l2.data(), h2.data());
        CHECK(bitwise_equal(l1, l2));
        CHECK(bitwise_equal(h1, h2));
      }
      {
        const auto zr = draw(rng, n, -5, 5), zi = draw(rng, n, -5, 5);
        std::vector<double> o1r(n), o1i(n), o2r(n), o2i(n);
        s.gl_det(lam.data(), zr.data(), zi.data(), n, m2, nu, o1r.data(), o1i.data());
        v.gl_det(lam.data(), zr.data(), zi.data(), n, m2, nu, o2r.data(), o2i.data());
        CHECK(bitwise_equal(o1r, o2r));
        CHECK(bitwise_equal(o1i, o2i));
      }
      {
        const auto a = draw(rng, n, 1e-2, 1e6);
        const double wr = gen::uniform(rng, -3, 3), wi = gen::uniform(rng, 0.1, 3);
        std::vector<double> o1(n), o2(n);
        s.diag_ratio(a.data(), n, wr, wi, o1.data());
        v.diag_ratio(a.data(), n, wr, wi, o2.data());
        CHECK(bitwise_equal(o1, o2));
      }
    }
  });
}

TEST_CASE("scalar kernels agree with direct formulas") {
  Rng rng(62);
  const std::size_t n = 33;
  const auto lam = draw(rng, n, -20, 20);
  const double m2 = 1.7, nu = 0.45;
  std::vector<double> lo(n), hi(n), br_lo(n), br_hi(n);
  kernels(Isa::scalar).gl_symbol_eigs(lam.data(), n, m2, nu, lo.data(), hi.data());
  kernels(Isa::scalar).gl_l_branches(lam.data(), n, m2, nu, br_lo.data(), br_hi.data());
  for (std::size_t k = 0; k < n; ++k) {
    const double a = lam[k] * lam[k] + m2, c2 = nu * nu * lam[k] * lam[k];
    // Eigenvalues of [[a, c], [c, 1]] satisfy t^2 - (a + 1) t + (a - c^2) = 0.
    for (double t : {lo[k], hi[k]}) CHECK(std::abs(t * t - (a + 1) * t + (a - c2)) <= 1e-10 * (1 + a * a));
    CHECK(br_lo[k] == doctest::Approx(nu * lam[k] - std::sqrt(a)));
    CHECK(br_hi[k] == doctest::Approx(nu * lam[k] + std::sqrt(a)));
  }
}

}  // TEST_SUITE
