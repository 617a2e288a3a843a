#include "ogs/penalty.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace ogs {

std::string_view to_string(PenaltyKind kind) {
  switch (kind) {
    case PenaltyKind::abs:
      return "abs";
    case PenaltyKind::log:
      return "log";
    case PenaltyKind::atan:
      return "atan";
    case PenaltyKind::rat:
      return "rat";
  }
  return "?";
}

PenaltyKind parse_penalty_kind(std::string_view name) {
  if (name == "abs") return PenaltyKind::abs;
  if (name == "log") return PenaltyKind::log;
  if (name == "atan") return PenaltyKind::atan;
  if (name == "rat" || name == "rational") return PenaltyKind::rat;
  throw std::invalid_argument("unknown penalty kind '" + std::string(name) +
                              "' (expected abs|log|atan|rat)");
}

Penalty::Penalty(PenaltyKind kind, double a) : kind_(kind), a_(a) {
  if (kind_ == PenaltyKind::abs) {
    a_ = 0.0;
    return;
  }
  if (!std::isfinite(a_) || a_ < 0.0)
    throw std::invalid_argument("penalty parameter a must be finite and >= 0");
  if ((kind_ == PenaltyKind::log || kind_ == PenaltyKind::atan) && a_ == 0.0)
    throw std::invalid_argument(std::string(to_string(kind_)) +
                                " penalty requires a > 0");
}

double Penalty::value(double x) const {
  const double u = std::fabs(x);
  switch (kind_) {
    case PenaltyKind::abs:
      return u;
    case PenaltyKind::log:
      return std::log1p(a_ * u) / a_;
    case PenaltyKind::atan: {
      // atan((1 + 2au)/sqrt3) - pi/6 folded into a single atan so small a*u
      // does not cancel.
      constexpr double sqrt3 = std::numbers::sqrt3;
      const double au = a_ * u;
      return 2.0 / (a_ * sqrt3) * std::atan(sqrt3 * au / (2.0 + au));
    }
    case PenaltyKind::rat:
      return u / (1.0 + 0.5 * a_ * u);
  }
  return 0.0;
}

double Penalty::deriv(double x) const {
  if (x == 0.0) throw std::domain_error("penalty derivative undefined at 0");
  const double s = x > 0.0 ? 1.0 : -1.0;
  return s * weight_unchecked(std::fabs(x)) * std::fabs(x);
}

double Penalty::second_deriv(double x) const {
  if (x == 0.0)
    throw std::domain_error("penalty second derivative undefined at 0");
  const double u = std::fabs(x);
  switch (kind_) {
    case PenaltyKind::abs:
      return 0.0;
    case PenaltyKind::log: {
      const double d = 1.0 + a_ * u;
      return -a_ / (d * d);
    }
    case PenaltyKind::atan: {
      const double d = 1.0 + a_ * u + a_ * a_ * u * u;
      return -(a_ + 2.0 * a_ * a_ * u) / (d * d);
    }
    case PenaltyKind::rat: {
      const double d = 1.0 + 0.5 * a_ * u;
      return -a_ / (d * d * d);
    }
  }
  return 0.0;
}

double Penalty::curvature_at_zero() const {
  return kind_ == PenaltyKind::abs ? 0.0 : -a_;
}

std::string Penalty::describe() const {
  std::ostringstream os;
  os << to_string(kind_);
  if (kind_ != PenaltyKind::abs) os << "(a=" << a_ << ")";
  return os.str();
}

void Penalty::throw_weight_domain(double u) {
  std::ostringstream os;
  os << "penalty weight phi'(u)/u requires u > 0, got " << u;
  throw std::domain_error(os.str());
}

double max_convex_a(double lambda, std::size_t group_cardinality) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be > 0");
  if (group_cardinality == 0)
    throw std::invalid_argument("group cardinality must be >= 1");
  return 1.0 / (static_cast<double>(group_cardinality) * lambda);
}

bool is_strictly_convex(const Penalty& p, double lambda,
                        std::size_t group_cardinality) {
  if (p.kind() == PenaltyKind::abs) return true;
  return p.curvature_at_zero() >
         -1.0 / (static_cast<double>(group_cardinality) * lambda);
}

double shape_from_fraction(double beta, double lambda,
                           std::size_t group_cardinality) {
  if (!(beta >= 0.0 && beta <= 1.0))
    throw std::invalid_argument("penalty fraction beta must lie in [0, 1]");
  const double bound = max_convex_a(lambda, group_cardinality);
  return std::min(beta, 1.0 - kConvexityMargin) * bound;
}

Penalty penalty_from_fraction(PenaltyKind kind, double beta, double lambda,
                              std::size_t group_cardinality) {
  if (kind == PenaltyKind::abs) return Penalty::abs();
  return {kind, shape_from_fraction(beta, lambda, group_cardinality)};
}

}  // namespace ogs
