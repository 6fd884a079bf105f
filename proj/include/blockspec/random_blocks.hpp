#pragma once

// Seeded generators for property tests and the acceptance suite.

#include <cstdint>
#include <random>

#include "blockspec/block_core.hpp"

namespace blockspec {

using Rng = std::mt19937_64;

CMatrix random_complex(Rng& rng, std::size_t rows, std::size_t cols);
CMatrix random_hermitian(Rng& rng, std::size_t n);
CMatrix random_unitary(Rng& rng, std::size_t n);

enum class BlockFlavor {
  general,   ///< A = Q diag(+-U(0.5, 2)) Q*, arbitrary Hermitian B, arbitrary C
  positive,  ///< [[A, C*], [C, B]] = X X* / (2n) + I/2
};

struct RandomBlockOptions {
  BlockFlavor flavor = BlockFlavor::general;
  /// Reject draws where A, S(0) or the assembled matrix has an eigenvalue
  /// closer than this to zero.
  double min_abs_eig = 0.05;
  /// Force at least one negative eigenvalue in A (general flavor only).
  bool require_indefinite_A = false;
  int max_attempts = 1000;
};

BlockCoefficients random_blocks(Rng& rng, std::size_t n, const RandomBlockOptions& opts = {});

/// Uniform sample from |Re|, |Im| <= radius at distance >= min_dist from sigma(A).
cplx random_z_off_spectrum(Rng& rng, const CMatrix& A, double radius, double min_dist);

}  // namespace blockspec
