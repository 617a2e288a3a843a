#pragma once

#include <complex>
#include <span>
#include <vector>

#include "ogs/penalty.hpp"

namespace ogs {

/// Scalar/group penalized least squares with threshold lambda:
///   theta(y) = argmin_x 0.5 |y - x|^2 + lambda phi(|x|).
/// Construction rejects penalties that make the objective non-convex.
class ThresholdProblem {
 public:
  ThresholdProblem(double lambda, Penalty penalty);

  double lambda() const { return lambda_; }
  const Penalty& penalty() const { return penalty_; }

 private:
  double lambda_;
  Penalty penalty_;
};

/// Exactly 0 for |y| <= lambda, otherwise the root of x + lambda phi'(x) = |y|
/// on (0, |y|) carrying the sign of y.
double scalar_threshold(const ThresholdProblem& tp, double y);

/// theta'(lambda+) = 1 / (1 + lambda phi''(0+)).
double scalar_threshold_slope_at_threshold(const ThresholdProblem& tp);

/// Multivariate threshold: zero when ||y||_2 <= lambda, otherwise y scaled by
/// the real factor theta(||y||)/||y||. Complex inputs keep their phases.
/// Throws std::domain_error on empty input.
std::vector<double> group_threshold(const ThresholdProblem& tp,
                                    std::span<const double> y);
std::vector<std::complex<double>> group_threshold(
    const ThresholdProblem& tp, std::span<const std::complex<double>> y);

}  // namespace ogs
