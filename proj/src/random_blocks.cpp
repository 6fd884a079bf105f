#include "blockspec/random_blocks.hpp"

#include <algorithm>
#include <cmath>

namespace blockspec {

namespace {

double min_abs(const std::vector<double>& w) {
  double m = INFINITY;
  for (double v : w) m = std::min(m, std::abs(v));
  return m;
}

}  // namespace

CMatrix random_complex(Rng& rng, std::size_t rows, std::size_t cols) {
  std::normal_distribution<double> g(0.0, 1.0 / std::sqrt(2.0));
  std::vector<cplx> e(rows * cols);
  for (auto& v : e) {
    const double re = g(rng);
    const double im = g(rng);
    v = {re, im};
  }
  return CMatrix(rows, cols, std::move(e));
}

CMatrix random_hermitian(Rng& rng, std::size_t n) {
  const CMatrix g = random_complex(rng, n, n);
  CMatrix h = g + g.adjoint();
  h *= 0.5;
  return h;
}

CMatrix random_unitary(Rng& rng, std::size_t n) { return hermitian_eig(random_hermitian(rng, n)).vectors; }

BlockCoefficients random_blocks(Rng& rng, std::size_t n, const RandomBlockOptions& opts) {
  if (n == 0) throw Error(ErrorKind::invalid_argument, "block size must be positive");
  std::uniform_real_distribution<double> mag(0.5, 2.0);
  std::bernoulli_distribution coin(0.5);
  for (int attempt = 0; attempt < opts.max_attempts; ++attempt) {
    BlockCoefficients c;
    if (opts.flavor == BlockFlavor::positive) {
      const CMatrix x = random_complex(rng, 2 * n, 2 * n);
      CMatrix big = x * x.adjoint();
      big *= 1.0 / static_cast<double>(2 * n);
      big = add_identity(std::move(big), 0.5);
      c.A = big.block(0, 0, n, n);
      c.C = big.block(n, 0, n, n);
      c.B = big.block(n, n, n, n);
      // Exact Hermitian symmetry on the diagonal blocks.
      c.A = 0.5 * (c.A + c.A.adjoint());
      c.B = 0.5 * (c.B + c.B.adjoint());
      c.label = "random-positive";
    } else {
      std::vector<double> d(n);
      bool any_neg = false;
      for (auto& v : d) {
        v = mag(rng) * (coin(rng) ? 1.0 : -1.0);
        any_neg = any_neg || v < 0.0;
      }
      if (opts.require_indefinite_A && !any_neg) d[0] = -std::abs(d[0]);
      const CMatrix q = random_unitary(rng, n);
      c.A = q * CMatrix::diagonal(std::span<const double>(d)) * q.adjoint();
      c.A = 0.5 * (c.A + c.A.adjoint());
      c.B = random_hermitian(rng, n);
      c.C = random_complex(rng, n, n);
      c.label = "random-general";
    }
    if (min_abs(hermitian_eigenvalues(c.A)) < opts.min_abs_eig) continue;
    if (min_abs(hermitian_eigenvalues(schur_S(c, 0.0))) < opts.min_abs_eig) continue;
    if (min_abs(hermitian_eigenvalues(assemble_selfadjoint(c))) < opts.min_abs_eig) continue;
    return c;
  }
  throw Error(ErrorKind::convergence_failure, "no admissible random block instance found");
}

cplx random_z_off_spectrum(Rng& rng, const CMatrix& A, double radius, double min_dist) {
  const auto w = hermitian_eigenvalues(A);
  std::uniform_real_distribution<double> u(-radius, radius);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    const double re = u(rng);
    const double im = u(rng);
    const cplx z{re, im};
    double d = INFINITY;
    for (double l : w) d = std::min(d, std::abs(z - l));
    if (d >= min_dist) return z;
  }
  throw Error(ErrorKind::convergence_failure, "could not sample z away from the spectrum of A");
}

}  // namespace blockspec
