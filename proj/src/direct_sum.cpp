#include "blockspec/direct_sum.hpp"

#include <algorithm>
#include <cmath>

#include "blockspec/linalg.hpp"
#include "blockspec/simd/kernels.hpp"

namespace blockspec {

namespace {

constexpr cplx kI{0.0, 1.0};

void require_positive(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw Error(ErrorKind::non_positive_weight, "weight " + std::to_string(a) + " is not positive");
  }
}

std::vector<std::size_t> default_truncations(std::size_t n) {
  std::vector<std::size_t> t;
  for (std::size_t k = 1; k < n; k *= 2) t.push_back(k);
  if (n > 0) t.push_back(n);
  return t;
}

}  // namespace

std::string_view to_string(BRule r) noexcept { return r == BRule::identity ? "identity" : "inverse"; }

void DiagonalModel::validate() const {
  if (weights.empty()) throw Error(ErrorKind::invalid_argument, "weight list is empty");
  for (double a : weights) require_positive(a);
}

BlockCoefficients DiagonalModel::coefficients() const {
  validate();
  const std::size_t n = weights.size();
  BlockCoefficients c;
  c.A = CMatrix::diagonal(std::span<const double>(weights));
  if (b_rule == BRule::identity) {
    c.B = CMatrix::identity(n);
  } else {
    std::vector<double> inv(n);
    std::transform(weights.begin(), weights.end(), inv.begin(), [](double a) { return 1.0 / a; });
    c.B = CMatrix::diagonal(std::span<const double>(inv));
  }
  c.C = CMatrix(n, n);
  c.label = std::string("diagonal-") + std::string(to_string(b_rule));
  return c;
}

CMatrix model_block(double a, BRule rule) {
  require_positive(a);
  const cplx b = rule == BRule::identity ? kI : kI / a;
  return CMatrix::from_rows({{0.0, b}, {-kI * a, 0.0}});
}

BlockEigendata block_eigendata(double a, BRule rule) {
  require_positive(a);
  // Eigenvalue +-s with eigenvector (1, -+ i a / s), s = sqrt(a) or 1.
  const double s = rule == BRule::identity ? std::sqrt(a) : 1.0;
  const double q = a / s;
  const double norm = std::sqrt(1.0 + q * q);
  BlockEigendata e;
  e.values = {cplx{s, 0.0}, cplx{-s, 0.0}};
  e.vectors = CMatrix::from_rows({{1.0 / norm, 1.0 / norm}, {-kI * q / norm, kI * q / norm}});
  e.cos_angle = std::abs(1.0 - q * q) / (1.0 + q * q);
  return e;
}

CMatrix riesz_projector(double a, BRule rule, bool positive) {
  const CMatrix l = model_block(a, rule);
  auto w = eigenvalues(l);
  std::sort(w.begin(), w.end(), [](cplx x, cplx y) { return x.real() > y.real(); });
  const cplx gap = w[0] - w[1];
  if (std::abs(gap) <= 1e-12 * std::max(1.0, std::abs(w[0]))) {
    throw Error(ErrorKind::degenerate_eigenvalues, "block eigenvalues coincide");
  }
  return positive ? (1.0 / gap) * shifted(l, w[1]) : (-1.0 / gap) * shifted(l, w[0]);
}

double projector_norm(double a, BRule rule) { return spectral_norm(riesz_projector(a, rule)); }

double projector_norm_closed_form(double a, BRule rule) {
  require_positive(a);
  return rule == BRule::identity ? (a + 1.0) / (2.0 * std::sqrt(a)) : (1.0 + a * a) / (2.0 * a);
}

ProjectorGrowth projector_growth_scan(const DiagonalModel& model) {
  model.validate();
  ProjectorGrowth g;
  g.weights = model.weights;
  g.norms.reserve(model.weights.size());
  for (double a : model.weights) g.norms.push_back(projector_norm(a, model.b_rule));

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const auto n = static_cast<double>(g.weights.size());
  for (std::size_t k = 0; k < g.weights.size(); ++k) {
    const double x = std::log(g.weights[k]);
    const double y = std::log(g.norms[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double var = sxx - sx * sx / n;
  g.exponent = var > 1e-12 * std::max(1.0, sxx) ? (sxy - sx * sy / n) / var : 0.0;

  g.monotone = true;
  for (std::size_t k = 1; k < g.weights.size(); ++k) {
    if (g.weights[k] >= 1.0 && g.weights[k - 1] >= 1.0 && g.norms[k] < g.norms[k - 1] * (1.0 - 1e-12)) {
      g.monotone = false;
    }
  }
  g.singular_critical_point_evidence =
      g.monotone && g.exponent >= 0.25 && g.norms.back() >= 2.0 * g.norms.front();
  return g;
}

TInverseScan t_inverse_norm_scan(const DiagonalModel& model, cplx z, std::span<const std::size_t> truncations) {
  model.validate();
  const auto& w = model.weights;
  const cplx z2 = z * z;
  std::vector<std::size_t> owned;
  if (truncations.empty()) {
    owned = default_truncations(w.size());
    truncations = owned;
  }
  TInverseScan s;
  s.z = z;
  std::vector<double> ratio(w.size());
  if (model.b_rule == BRule::identity) {
    for (double a : w) {
      if (std::abs(a - z2) <= 1e-14 * a) {
        throw Error(ErrorKind::z_squared_in_spectrum, "z^2 coincides with the weight " + std::to_string(a));
      }
    }
    simd::kernels().diag_ratio(w.data(), w.size(), z2.real(), z2.imag(), ratio.data());
  } else {
    const double d = std::abs(1.0 - z2);
    if (d == 0.0) throw Error(ErrorKind::z_squared_in_spectrum, "T(z) vanishes identically at z^2 = 1");
    std::transform(w.begin(), w.end(), ratio.begin(), [d](double a) { return a / d; });
  }
  for (std::size_t n : truncations) {
    if (n == 0 || n > w.size()) throw Error(ErrorKind::invalid_argument, "truncation size out of range");
    s.truncation.push_back(n);
    s.norms.push_back(*std::max_element(ratio.begin(), ratio.begin() + static_cast<std::ptrdiff_t>(n)));
  }
  s.nondecreasing = std::is_sorted(s.norms.begin(), s.norms.end());
  s.last = s.norms.empty() ? 0.0 : s.norms.back();
  return s;
}

DefinitizabilityProbe definitizability_probe(const DiagonalModel& model, cplx z,
                                             std::span<const std::size_t> truncations) {
  if (model.b_rule != BRule::inverse) {
    throw Error(ErrorKind::wrong_rule, "definitizability probe applies to the inverse rule B = A^{-1}");
  }
  model.validate();
  DefinitizabilityProbe p;
  // T(z) = (1 - z^2) A^{-1}
  for (double a : model.weights) {
    p.t_at_plus_one = std::max(p.t_at_plus_one, std::abs((1.0 - 1.0 * 1.0) / a));
    p.t_at_minus_one = std::max(p.t_at_minus_one, std::abs((1.0 - (-1.0) * (-1.0)) / a));
  }
  p.scan = t_inverse_norm_scan(model, z, truncations);
  const double d = std::abs(1.0 - z * z);
  for (std::size_t k = 0; k < p.scan.truncation.size(); ++k) {
    const double expect = model.weights[p.scan.truncation[k] - 1] / d;
    p.linear_fit_error = std::max(p.linear_fit_error, std::abs(p.scan.norms[k] - expect) / expect);
  }
  p.resolvent_empty_in_limit = p.t_at_plus_one == 0.0 && p.t_at_minus_one == 0.0 && p.scan.nondecreasing &&
                               p.scan.norms.size() > 1 && p.scan.norms.back() > p.scan.norms.front();
  p.note =
      "finite truncations keep a nonempty resolvent set; only the growth of ||T(z)^{-1}|| with the "
      "largest weight is observable";
  return p;
}

}  // namespace blockspec
