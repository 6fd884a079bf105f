// Compiled with -mavx2 only; callers reach these through the dispatch table
// after a CPUID check.

#include <immintrin.h>

#include <cmath>

#include "blockspec/simd/kernels.hpp"
#include "kernel_impl.hpp"

namespace blockspec::simd {

namespace {

constexpr std::size_t kLanes = 4;

inline __m256d neg(__m256d v) { return _mm256_xor_pd(v, _mm256_set1_pd(-0.0)); }

void poly_eval(const double* c_re, const double* c_im, std::size_t ncoef, const double* x,
               std::size_t n, double* out_re, double* out_im) {
  std::size_t i = 0;
  const __m256d top_re = _mm256_set1_pd(c_re[ncoef - 1]);
  const __m256d top_im = _mm256_set1_pd(c_im[ncoef - 1]);
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d xv = _mm256_loadu_pd(x + i);
    __m256d re = top_re;
    __m256d im = top_im;
    for (std::size_t k = ncoef - 1; k-- > 0;) {
      re = _mm256_add_pd(_mm256_mul_pd(re, xv), _mm256_set1_pd(c_re[k]));
      im = _mm256_add_pd(_mm256_mul_pd(im, xv), _mm256_set1_pd(c_im[k]));
    }
    _mm256_storeu_pd(out_re + i, re);
    _mm256_storeu_pd(out_im + i, im);
  }
  for (; i < n; ++i) impl::poly_eval_one(c_re, c_im, ncoef, x[i], out_re[i], out_im[i]);
}

void symbol_denominator(const double* a_re, const double* a_im, const double* b_re, const double* b_im,
                        const double* c_re, const double* c_im, std::size_t n, double z_re,
                        double z_im, double sign, double* d_re, double* d_im) {
  const double sz_re_s = sign * z_re;
  const double sz_im_s = sign * z_im;
  const __m256d sz_re = _mm256_set1_pd(sz_re_s);
  const __m256d sz_im = _mm256_set1_pd(sz_im_s);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d ar = _mm256_loadu_pd(a_re + i);
    const __m256d ai = _mm256_loadu_pd(a_im + i);
    const __m256d br = _mm256_loadu_pd(b_re + i);
    const __m256d bi = _mm256_loadu_pd(b_im + i);
    const __m256d cr = _mm256_loadu_pd(c_re + i);
    const __m256d ci = _mm256_loadu_pd(c_im + i);
    const __m256d abr = _mm256_sub_pd(_mm256_mul_pd(ar, br), _mm256_mul_pd(ai, bi));
    const __m256d abi = _mm256_add_pd(_mm256_mul_pd(ar, bi), _mm256_mul_pd(ai, br));
    const __m256d ur = _mm256_sub_pd(cr, sz_im);
    const __m256d ui = _mm256_add_pd(ci, sz_re);
    const __m256d vr = _mm256_add_pd(cr, sz_im);
    const __m256d vi = _mm256_sub_pd(neg(ci), sz_re);
    const __m256d pr = _mm256_sub_pd(_mm256_mul_pd(ur, vr), _mm256_mul_pd(ui, vi));
    const __m256d pi = _mm256_add_pd(_mm256_mul_pd(ur, vi), _mm256_mul_pd(ui, vr));
    _mm256_storeu_pd(d_re + i, _mm256_sub_pd(abr, pr));
    _mm256_storeu_pd(d_im + i, _mm256_sub_pd(abi, pi));
  }
  for (; i < n; ++i) {
    impl::symbol_denominator_one(a_re[i], a_im[i], b_re[i], b_im[i], c_re[i], c_im[i], z_re, z_im,
                                 sign, d_re[i], d_im[i]);
  }
}

RatioMax abs_ratio_max(const double* num_re, const double* num_im, const double* den_re,
                       const double* den_im, std::size_t n, double near_zero_abs) {
  const double thr2_s = near_zero_abs * near_zero_abs;
  const __m256d thr2 = _mm256_set1_pd(thr2_s);
  __m256d best = _mm256_set1_pd(-1.0);
  __m256d best_idx = _mm256_setzero_pd();
  __m256d idx = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);
  const __m256d step = _mm256_set1_pd(static_cast<double>(kLanes));
  RatioMax out;
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d nr = _mm256_loadu_pd(num_re + i);
    const __m256d ni = _mm256_loadu_pd(num_im + i);
    const __m256d dr = _mm256_loadu_pd(den_re + i);
    const __m256d di = _mm256_loadu_pd(den_im + i);
    const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dr, dr), _mm256_mul_pd(di, di));
    const __m256d small = _mm256_cmp_pd(d2, thr2, _CMP_LE_OQ);
    out.near_zero += static_cast<std::size_t>(__builtin_popcount(_mm256_movemask_pd(small)));
    const __m256d n2 = _mm256_add_pd(_mm256_mul_pd(nr, nr), _mm256_mul_pd(ni, ni));
    const __m256d r2 = _mm256_div_pd(n2, d2);
    const __m256d better = _mm256_andnot_pd(small, _mm256_cmp_pd(r2, best, _CMP_GT_OQ));
    best = _mm256_blendv_pd(best, r2, better);
    best_idx = _mm256_blendv_pd(best_idx, idx, better);
    idx = _mm256_add_pd(idx, step);
  }
  alignas(32) double lanes[kLanes];
  alignas(32) double lane_idx[kLanes];
  _mm256_store_pd(lanes, best);
  _mm256_store_pd(lane_idx, best_idx);
  double b = -1.0;
  for (std::size_t l = 0; l < kLanes; ++l) {
    if (lanes[l] < 0.0) continue;
    const auto li = static_cast<std::size_t>(lane_idx[l]);
    if (lanes[l] > b || (lanes[l] == b && li < out.index)) {
      b = lanes[l];
      out.index = li;
    }
  }
  for (; i < n; ++i) {
    const double d2 = den_re[i] * den_re[i] + den_im[i] * den_im[i];
    if (d2 <= thr2_s) {
      ++out.near_zero;
      continue;
    }
    const double r2 = impl::ratio_sq(num_re[i], num_im[i], den_re[i], den_im[i]);
    if (r2 > b) {
      b = r2;
      out.index = i;
    }
  }
  out.value = b < 0.0 ? 0.0 : std::sqrt(b);
  return out;
}

void gl_symbol_eigs(const double* lambda, std::size_t n, double m2, double nu, double* lo, double* hi) {
  const double nu2_s = nu * nu;
  const double nu2x4_s = 4.0 * nu2_s;
  const __m256d m2v = _mm256_set1_pd(m2);
  const __m256d nu2 = _mm256_set1_pd(nu2_s);
  const __m256d nu2x4 = _mm256_set1_pd(nu2x4_s);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d half = _mm256_set1_pd(0.5);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d l = _mm256_loadu_pd(lambda + i);
    const __m256d l2 = _mm256_mul_pd(l, l);
    const __m256d a = _mm256_add_pd(l2, m2v);
    const __m256d diff = _mm256_sub_pd(a, one);
    const __m256d disc =
        _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(diff, diff), _mm256_mul_pd(nu2x4, l2)));
    const __m256d h = _mm256_mul_pd(_mm256_add_pd(_mm256_add_pd(a, one), disc), half);
    const __m256d det = _mm256_sub_pd(a, _mm256_mul_pd(nu2, l2));
    _mm256_storeu_pd(hi + i, h);
    _mm256_storeu_pd(lo + i, _mm256_div_pd(det, h));
  }
  for (; i < n; ++i) impl::gl_symbol_eigs_one(lambda[i], m2, nu2_s, nu2x4_s, lo[i], hi[i]);
}

void gl_l_branches(const double* lambda, std::size_t n, double m2, double nu, double* lo, double* hi) {
  const __m256d m2v = _mm256_set1_pd(m2);
  const __m256d nuv = _mm256_set1_pd(nu);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d l = _mm256_loadu_pd(lambda + i);
    const __m256d r = _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(l, l), m2v));
    const __m256d c = _mm256_mul_pd(nuv, l);
    _mm256_storeu_pd(lo + i, _mm256_sub_pd(c, r));
    _mm256_storeu_pd(hi + i, _mm256_add_pd(c, r));
  }
  for (; i < n; ++i) impl::gl_l_branches_one(lambda[i], m2, nu, lo[i], hi[i]);
}

void gl_det(const double* lambda, const double* z_re, const double* z_im, std::size_t n, double m2,
            double nu, double* out_re, double* out_im) {
  const double omn_s = 1.0 - nu * nu;
  const __m256d omn = _mm256_set1_pd(omn_s);
  const __m256d m2v = _mm256_set1_pd(m2);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d l = _mm256_loadu_pd(lambda + i);
    const __m256d zr = _mm256_loadu_pd(z_re + i);
    const __m256d zi = _mm256_loadu_pd(z_im + i);
    const __m256d l2 = _mm256_mul_pd(l, l);
    const __m256d t1r = _mm256_mul_pd(l2, _mm256_sub_pd(omn, zr));
    const __m256d t1i = _mm256_mul_pd(l2, neg(zi));
    const __m256d a = _mm256_sub_pd(m2v, zr);
    const __m256d c = _mm256_sub_pd(one, zr);
    const __m256d pr = _mm256_sub_pd(_mm256_mul_pd(a, c), _mm256_mul_pd(zi, zi));
    const __m256d pi = neg(_mm256_add_pd(_mm256_mul_pd(a, zi), _mm256_mul_pd(zi, c)));
    _mm256_storeu_pd(out_re + i, _mm256_add_pd(t1r, pr));
    _mm256_storeu_pd(out_im + i, _mm256_add_pd(t1i, pi));
  }
  for (; i < n; ++i) impl::gl_det_one(lambda[i], z_re[i], z_im[i], m2, omn_s, out_re[i], out_im[i]);
}

void diag_ratio(const double* a, std::size_t n, double w_re, double w_im, double* out) {
  const __m256d wr = _mm256_set1_pd(w_re);
  const __m256d wi = _mm256_set1_pd(w_im);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d av = _mm256_loadu_pd(a + i);
    const __m256d dr = _mm256_sub_pd(av, wr);
    const __m256d di = neg(wi);
    const __m256d mod = _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(dr, dr), _mm256_mul_pd(di, di)));
    _mm256_storeu_pd(out + i, _mm256_div_pd(av, mod));
  }
  for (; i < n; ++i) out[i] = impl::diag_ratio_one(a[i], w_re, w_im);
}

constexpr KernelTable kAvx2{
    Isa::avx2, &poly_eval, &symbol_denominator, &abs_ratio_max, &gl_symbol_eigs,
    &gl_l_branches, &gl_det, &diag_ratio,
};

}  // namespace

namespace detail {
const KernelTable& avx2_table() noexcept { return kAvx2; }
}  // namespace detail

}  // namespace blockspec::simd
