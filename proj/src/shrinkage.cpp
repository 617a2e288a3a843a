#include "ogs/shrinkage.hpp"

#include <cmath>
#include <stdexcept>

namespace ogs {

ThresholdProblem::ThresholdProblem(double lambda, Penalty penalty)
    : lambda_(lambda), penalty_(penalty) {
  if (!(lambda_ > 0.0) || !std::isfinite(lambda_))
    throw std::invalid_argument("threshold lambda must be finite and > 0");
  if (!is_strictly_convex(penalty_, lambda_, 1))
    throw std::invalid_argument(
        "penalty parameter violates strict convexity: need a < 1/lambda");
}

namespace {

// Root of g(x) = x + lambda phi'(x) - y on (0, y], y > lambda. g is strictly
// increasing under the convexity bound, g(0+) = lambda - y < 0 and
// g(y) = lambda phi'(y) > 0, so Newton steps are kept inside a shrinking
// bracket and replaced by bisection whenever they leave it.
double solve_positive(const ThresholdProblem& tp, double y) {
  const Penalty& p = tp.penalty();
  const double lam = tp.lambda();
  double lo = 0.0;
  double hi = y;
  double x = y - lam;  // soft-threshold start, always inside (0, y)
  for (int it = 0; it < 200; ++it) {
    const double g = x + lam * p.deriv(x) - y;
    if (g == 0.0) return x;
    if (g > 0.0)
      hi = x;
    else
      lo = x;
    const double dg = 1.0 + lam * p.second_deriv(x);
    double next = x - g / dg;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - x) <= 1e-12 || hi - lo <= 1e-12) return next;
    x = next;
  }
  return 0.5 * (lo + hi);
}

template <typename T>
std::vector<T> group_threshold_impl(const ThresholdProblem& tp,
                                    std::span<const T> y) {
  if (y.empty()) throw std::domain_error("group threshold of an empty vector");
  double sq = 0.0;
  for (const T& v : y) sq += std::norm(v);
  const double norm = std::sqrt(sq);
  std::vector<T> out(y.size(), T{});
  if (norm <= tp.lambda()) return out;
  const double scale = scalar_threshold(tp, norm) / norm;
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = scale * y[i];
  return out;
}

}  // namespace

double scalar_threshold(const ThresholdProblem& tp, double y) {
  const double mag = std::fabs(y);
  if (mag <= tp.lambda()) return 0.0;
  if (tp.penalty().kind() == PenaltyKind::abs)
    return std::copysign(mag - tp.lambda(), y);
  return std::copysign(solve_positive(tp, mag), y);
}

double scalar_threshold_slope_at_threshold(const ThresholdProblem& tp) {
  const double denom = 1.0 + tp.lambda() * tp.penalty().curvature_at_zero();
  if (!(denom > 0.0))
    throw std::domain_error(
        "threshold slope undefined: 1 + lambda phi''(0+) <= 0 (non-convex)");
  return 1.0 / denom;
}

std::vector<double> group_threshold(const ThresholdProblem& tp,
                                    std::span<const double> y) {
  return group_threshold_impl(tp, y);
}

std::vector<std::complex<double>> group_threshold(
    const ThresholdProblem& tp, std::span<const std::complex<double>> y) {
  return group_threshold_impl(tp, y);
}

}  // namespace ogs
