#pragma once

// Data-parallel inner loops behind the symbol sweeps and diagonal-model scans.
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant; the variant is picked once at runtime from CPUID (override with
// BLOCKSPEC_SIMD=scalar|avx2). Variants are bitwise equivalent: no FMA
// contraction and the same operation order in every lane.

#include <cstddef>
#include <string_view>

namespace blockspec::simd {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa) noexcept;
/// Variant compiled into this binary.
bool isa_compiled(Isa isa) noexcept;
/// Compiled and usable on this CPU.
bool isa_supported(Isa isa) noexcept;
/// Best supported variant unless BLOCKSPEC_SIMD names another supported one.
Isa select_isa();

struct RatioMax {
  double value = 0.0;       ///< max |num| / |den| over the non-skipped entries
  std::size_t index = 0;    ///< first index attaining the max
  std::size_t near_zero = 0;///< entries skipped because |den| <= threshold
};

struct KernelTable {
  Isa isa;

  /// out = sum_k c[k] x^k (Horner), complex coefficients, real abscissae.
  void (*poly_eval)(const double* c_re, const double* c_im, std::size_t ncoef, const double* x,
                    std::size_t n, double* out_re, double* out_im);

  /// d = a*b - (c + s*i*z) * (conj(c) - s*i*z), elementwise.
  /// s = +1 gives the resolvent denominator, s = -1 the LRG-test denominator.
  void (*symbol_denominator)(const double* a_re, const double* a_im, const double* b_re,
                             const double* b_im, const double* c_re, const double* c_im,
                             std::size_t n, double z_re, double z_im, double sign, double* d_re,
                             double* d_im);

  RatioMax (*abs_ratio_max)(const double* num_re, const double* num_im, const double* den_re,
                            const double* den_im, std::size_t n, double near_zero_abs);

  /// Eigenvalues of [[l^2 + m2, c*], [c, 1]] with |c| = |nu l|: lo <= hi.
  void (*gl_symbol_eigs)(const double* lambda, std::size_t n, double m2, double nu, double* lo,
                         double* hi);

  /// Branches nu*l -+ sqrt(l^2 + m2) of the Fourier symbol of L.
  void (*gl_l_branches)(const double* lambda, std::size_t n, double m2, double nu, double* lo,
                        double* hi);

  /// l^2 (1 - z - nu^2) + (m2 - z)(1 - z) for paired (l, z) samples.
  void (*gl_det)(const double* lambda, const double* z_re, const double* z_im, std::size_t n,
                 double m2, double nu, double* out_re, double* out_im);

  /// out = a / |a - w| for positive diagonal weights a.
  void (*diag_ratio)(const double* a, std::size_t n, double w_re, double w_im, double* out);
};

const KernelTable& kernels();
/// Throws InvalidArgument if `isa` is not supported here.
const KernelTable& kernels(Isa isa);

namespace detail {
const KernelTable& scalar_table() noexcept;
const KernelTable& avx2_table() noexcept;
}  // namespace detail

}  // namespace blockspec::simd
