#pragma once

// Per-element scalar bodies shared by every variant (the AVX2 kernels use
// them for loop tails). Operation order here is the contract the vector
// code reproduces lane by lane.

#include <cmath>
#include <cstddef>

namespace blockspec::simd::impl {

inline void poly_eval_one(const double* c_re, const double* c_im, std::size_t ncoef, double x,
                          double& out_re, double& out_im) {
  double re = c_re[ncoef - 1];
  double im = c_im[ncoef - 1];
  for (std::size_t k = ncoef - 1; k-- > 0;) {
    re = re * x + c_re[k];
    im = im * x + c_im[k];
  }
  out_re = re;
  out_im = im;
}

inline void symbol_denominator_one(double ar, double ai, double br, double bi, double cr, double ci,
                                   double z_re, double z_im, double sign, double& dr, double& di) {
  const double abr = ar * br - ai * bi;
  const double abi = ar * bi + ai * br;
  const double sz_re = sign * z_re;
  const double sz_im = sign * z_im;
  const double ur = cr - sz_im;
  const double ui = ci + sz_re;
  const double vr = cr + sz_im;
  const double vi = -ci - sz_re;
  const double pr = ur * vr - ui * vi;
  const double pi = ur * vi + ui * vr;
  dr = abr - pr;
  di = abi - pi;
}

inline double ratio_sq(double nr, double ni, double dr, double di) {
  return (nr * nr + ni * ni) / (dr * dr + di * di);
}

inline void gl_symbol_eigs_one(double l, double m2, double nu2, double nu2x4, double& lo, double& hi) {
  const double l2 = l * l;
  const double a = l2 + m2;
  const double diff = a - 1.0;
  const double disc = std::sqrt(diff * diff + nu2x4 * l2);
  hi = ((a + 1.0) + disc) * 0.5;
  lo = (a - nu2 * l2) / hi;
}

inline void gl_l_branches_one(double l, double m2, double nu, double& lo, double& hi) {
  const double r = std::sqrt(l * l + m2);
  const double c = nu * l;
  lo = c - r;
  hi = c + r;
}

inline void gl_det_one(double l, double zr, double zi, double m2, double one_minus_nu2, double& out_re,
                       double& out_im) {
  const double l2 = l * l;
  const double wr = one_minus_nu2 - zr;
  const double t1r = l2 * wr;
  const double t1i = l2 * (-zi);
  const double a = m2 - zr;
  const double c = 1.0 - zr;
  const double pr = a * c - zi * zi;
  const double pi = -(a * zi + zi * c);
  out_re = t1r + pr;
  out_im = t1i + pi;
}

inline double diag_ratio_one(double a, double w_re, double w_im) {
  const double dr = a - w_re;
  const double di = -w_im;
  return a / std::sqrt(dr * dr + di * di);
}

}  // namespace blockspec::simd::impl
