#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "ogs/config.hpp"
#include "ogs/grid.hpp"

namespace ogs {

/// Raised when the MM update meets a state its initialization rules out
/// (a zero or non-finite reweighting term for a sample still in the support).
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

template <typename Signal>
struct OgsResult {
  Signal estimate;
  /// F(x_k) after each completed iteration k = 1..n (empty when cost
  /// tracking is off).
  std::vector<double> cost_trace;
  /// |S| after each iteration.
  std::vector<std::size_t> support_size_trace;
  /// F(y), the cost of the initial iterate (0 when cost tracking is off).
  double initial_cost = 0.0;
  int iterations_run = 0;
};

template <typename T>
using OgsResult1D = OgsResult<std::vector<T>>;
template <typename T>
using OgsResult2D = OgsResult<Grid<T>>;

/// Overlapping group shrinkage of a 1D signal (cfg.shape() must be 1xK).
///
/// Majorization-minimization with fully overlapping length-K groups and zero
/// extension on both sides. Starting from x = y, every iteration computes the
/// group norms for all group starts in [-(K-1), N-1], the weights
/// phi'(norm)/norm, their K-point back sums r(i), and updates
/// x(i) = y(i) / (1 + lambda r(i)) on the support. Samples whose magnitude
/// falls to epsilon or below leave the support and stay zero. O(N) work per
/// iteration; besides the output it keeps two scratch arrays (N+K-1 and N).
template <typename T>
OgsResult1D<T> ogs_denoise(std::span<const T> y, const OgsConfig& cfg);

/// F(x) = 0.5 ||y - x||^2 + lambda sum_i phi(||x_{i,K}||) over all group
/// starts i in [-(K-1), N-1]. Direct O(NK) evaluation.
template <typename T>
double ogs_cost(std::span<const T> y, std::span<const T> x,
                const OgsConfig& cfg);

/// The same cost for any penalty parameters, without the strict convexity
/// that OgsConfig enforces.
template <typename T>
double ogs_cost(std::span<const T> y, std::span<const T> x, double lambda,
                std::size_t group_len, const Penalty& p);

/// Quadratic majorizer of phi tangent at v:
///   q(x, v) = phi'(|v|)/(2|v|) x^2 + phi(v) - |v| phi'(|v|) / 2.
/// Throws std::domain_error for v == 0.
double majorizer_q(const Penalty& p, double x, double v);

/// Smallest one-sided difference quotient (F(x + step d) - F(x)) / step over
/// `trials` random unit directions d (complex signals use directions in
/// C^N). Near zero or positive at a minimizer of the convex cost.
template <typename T>
double optimality_check(std::span<const T> y, std::span<const T> x,
                        const OgsConfig& cfg, int trials, double step,
                        std::uint64_t seed);

// Convenience overloads for vectors.
template <typename T>
OgsResult1D<T> ogs_denoise(const std::vector<T>& y, const OgsConfig& cfg) {
  return ogs_denoise(std::span<const T>(y), cfg);
}
template <typename T>
double ogs_cost(const std::vector<T>& y, const std::vector<T>& x,
                const OgsConfig& cfg) {
  return ogs_cost(std::span<const T>(y), std::span<const T>(x), cfg);
}

namespace detail {

/// Weight for a group energy (squared norm); zero for an all-zero group.
inline double group_weight(const Penalty& p, double energy) {
  return energy > 0.0 ? p.weight_unchecked(std::sqrt(energy)) : 0.0;
}

}  // namespace detail

}  // namespace ogs
