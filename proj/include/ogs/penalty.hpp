#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ogs {

/// Sparsity-promoting penalty families. All are symmetric, increasing on
/// (0, inf), concave there, and have unit slope at zero.
enum class PenaltyKind { abs, log, atan, rat };

/// Lowercase config/CLI name: "abs", "log", "atan" or "rat".
std::string_view to_string(PenaltyKind kind);

/// Inverse of to_string. Also accepts "rational". Throws std::invalid_argument.
PenaltyKind parse_penalty_kind(std::string_view name);

/// A penalty phi(x; a) with its non-convexity parameter a.
///
/// log and atan require a > 0, rat accepts a >= 0 (a = 0 is |x|) and abs
/// ignores a. Invalid combinations are rejected at construction so every
/// evaluation below can assume a valid spec.
class Penalty {
 public:
  Penalty(PenaltyKind kind, double a);

  static Penalty abs() { return {PenaltyKind::abs, 0.0}; }

  PenaltyKind kind() const { return kind_; }
  double a() const { return a_; }

  double value(double x) const;

  /// phi'(x). Odd, positive for x > 0. Throws std::domain_error at x == 0.
  double deriv(double x) const;

  /// phi''(x) for x != 0. Throws std::domain_error at x == 0.
  double second_deriv(double x) const;

  /// phi'(u)/u, the only place the penalty enters the MM update.
  /// Throws std::domain_error unless u > 0.
  double weight(double u) const {
    if (!(u > 0.0)) throw_weight_domain(u);
    return weight_unchecked(u);
  }

  /// weight() without the domain check, for inner loops that guarantee u > 0.
  double weight_unchecked(double u) const {
    switch (kind_) {
      case PenaltyKind::abs:
        return 1.0 / u;
      case PenaltyKind::log:
        return 1.0 / (u * (1.0 + a_ * u));
      case PenaltyKind::atan:
        return 1.0 / (u * (1.0 + a_ * u + a_ * a_ * u * u));
      case PenaltyKind::rat: {
        const double d = 1.0 + 0.5 * a_ * u;
        return 1.0 / (u * d * d);
      }
    }
    return 0.0;
  }

  /// Right-sided second derivative at zero: -a, or 0 for abs.
  double curvature_at_zero() const;

  std::string describe() const;

 private:
  [[noreturn]] static void throw_weight_domain(double u);

  PenaltyKind kind_;
  double a_;
};

/// Exclusive upper bound 1/(card * lambda) on a for a strictly convex total
/// cost. card is the number of samples in one group (K, or K1*K2 in 2D).
double max_convex_a(double lambda, std::size_t group_cardinality);

/// True iff phi''(0+; a) > -1/(card * lambda). Always true for abs.
bool is_strictly_convex(const Penalty& p, double lambda,
                        std::size_t group_cardinality);

/// Relative distance kept from the convexity bound when a is derived from a
/// fraction beta of its maximum. beta = 1 maps to (1 - margin) / (card lambda).
inline constexpr double kConvexityMargin = 1e-9;

/// a = beta / (card * lambda), pulled inside the open bound when beta
/// reaches 1. beta must lie in [0, 1].
double shape_from_fraction(double beta, double lambda,
                           std::size_t group_cardinality);

/// Builds the penalty for a kind and fraction beta of the maximal a.
/// abs ignores beta; log and atan need beta > 0.
Penalty penalty_from_fraction(PenaltyKind kind, double beta, double lambda,
                              std::size_t group_cardinality);

}  // namespace ogs
