#include <cmath>

#include "blockspec/simd/kernels.hpp"
#include "kernel_impl.hpp"

namespace blockspec::simd {

namespace {

void poly_eval(const double* c_re, const double* c_im, std::size_t ncoef, const double* x,
               std::size_t n, double* out_re, double* out_im) {
  for (std::size_t i = 0; i < n; ++i) impl::poly_eval_one(c_re, c_im, ncoef, x[i], out_re[i], out_im[i]);
}

void symbol_denominator(const double* a_re, const double* a_im, const double* b_re, const double* b_im,
                        const double* c_re, const double* c_im, std::size_t n, double z_re,
                        double z_im, double sign, double* d_re, double* d_im) {
  for (std::size_t i = 0; i < n; ++i) {
    impl::symbol_denominator_one(a_re[i], a_im[i], b_re[i], b_im[i], c_re[i], c_im[i], z_re, z_im,
                                 sign, d_re[i], d_im[i]);
  }
}

RatioMax abs_ratio_max(const double* num_re, const double* num_im, const double* den_re,
                       const double* den_im, std::size_t n, double near_zero_abs) {
  const double thr2 = near_zero_abs * near_zero_abs;
  RatioMax out;
  double best = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d2 = den_re[i] * den_re[i] + den_im[i] * den_im[i];
    if (d2 <= thr2) {
      ++out.near_zero;
      continue;
    }
    const double r2 = impl::ratio_sq(num_re[i], num_im[i], den_re[i], den_im[i]);
    if (r2 > best) {
      best = r2;
      out.index = i;
    }
  }
  out.value = best < 0.0 ? 0.0 : std::sqrt(best);
  return out;
}

void gl_symbol_eigs(const double* lambda, std::size_t n, double m2, double nu, double* lo, double* hi) {
  const double nu2 = nu * nu;
  const double nu2x4 = 4.0 * nu2;
  for (std::size_t i = 0; i < n; ++i) impl::gl_symbol_eigs_one(lambda[i], m2, nu2, nu2x4, lo[i], hi[i]);
}

void gl_l_branches(const double* lambda, std::size_t n, double m2, double nu, double* lo, double* hi) {
  for (std::size_t i = 0; i < n; ++i) impl::gl_l_branches_one(lambda[i], m2, nu, lo[i], hi[i]);
}

void gl_det(const double* lambda, const double* z_re, const double* z_im, std::size_t n, double m2,
            double nu, double* out_re, double* out_im) {
  const double one_minus_nu2 = 1.0 - nu * nu;
  for (std::size_t i = 0; i < n; ++i) {
    impl::gl_det_one(lambda[i], z_re[i], z_im[i], m2, one_minus_nu2, out_re[i], out_im[i]);
  }
}

void diag_ratio(const double* a, std::size_t n, double w_re, double w_im, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = impl::diag_ratio_one(a[i], w_re, w_im);
}

constexpr KernelTable kScalar{
    Isa::scalar, &poly_eval, &symbol_denominator, &abs_ratio_max, &gl_symbol_eigs,
    &gl_l_branches, &gl_det, &diag_ratio,
};

}  // namespace

namespace detail {
const KernelTable& scalar_table() noexcept { return kScalar; }
}  // namespace detail

}  // namespace blockspec::simd
