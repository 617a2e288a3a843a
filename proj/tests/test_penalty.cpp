#include <cmath>
#include <random>

#include "doctest.h"
#include "ogs/penalty.hpp"

using namespace ogs;

namespace {
const PenaltyKind kAllKinds[] = {PenaltyKind::abs, PenaltyKind::log,
                                 PenaltyKind::atan, PenaltyKind::rat};
const PenaltyKind kNonConvex[] = {PenaltyKind::log, PenaltyKind::atan,
                                  PenaltyKind::rat};
}  // namespace

TEST_CASE("penalty names round trip") {
  for (auto k : kAllKinds) CHECK(parse_penalty_kind(to_string(k)) == k);
  CHECK(parse_penalty_kind("rational") == PenaltyKind::rat);
  CHECK_THROWS_AS(parse_penalty_kind("lp"), std::invalid_argument);
}

TEST_CASE("construction validates a") {
  CHECK_THROWS_AS(Penalty(PenaltyKind::log, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Penalty(PenaltyKind::atan, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Penalty(PenaltyKind::atan, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(Penalty(PenaltyKind::rat, NAN), std::invalid_argument);
  CHECK_NOTHROW(Penalty(PenaltyKind::rat, 0.0));
  CHECK(Penalty(PenaltyKind::abs, 7.0).a() == 0.0);
}

TEST_CASE("penalty values") {
  CHECK(Penalty::abs().value(-3.0) == 3.0);
  CHECK(Penalty(PenaltyKind::log, 1.0).value(0.0) == 0.0);
  CHECK(Penalty(PenaltyKind::rat, 2.0).value(1.0) == doctest::Approx(0.5));
  CHECK(Penalty(PenaltyKind::atan, 0.001).value(2.0) ==
        doctest::Approx(2.0).epsilon(1e-2));
  // The stable atan form equals the textbook difference of arctangents.
  const double a = 0.3, u = 2.7;
  const double textbook =
      2.0 / (a * std::sqrt(3.0)) *
      (std::atan((1.0 + 2.0 * a * u) / std::sqrt(3.0)) - M_PI / 6.0);
  CHECK(Penalty(PenaltyKind::atan, a).value(u) ==
        doctest::Approx(textbook).epsilon(1e-14));
}

TEST_CASE("penalty derivatives") {
  CHECK(Penalty::abs().deriv(5.0) == 1.0);
  CHECK(Penalty::abs().deriv(-5.0) == -1.0);
  CHECK(Penalty(PenaltyKind::log, 0.2).deriv(1.0) ==
        doctest::Approx(1.0 / 1.2));
  CHECK(Penalty(PenaltyKind::atan, 0.5).deriv(1e-12) ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(Penalty::abs().deriv(0.0), std::domain_error);
  CHECK_THROWS_AS(Penalty(PenaltyKind::log, 1.0).second_deriv(0.0),
                  std::domain_error);
}

TEST_CASE("weights phi'(u)/u") {
  CHECK(Penalty::abs().weight(2.0) == 0.5);
  CHECK(Penalty(PenaltyKind::atan, 1.0).weight(1.0) ==
        doctest::Approx(1.0 / 3.0));
  CHECK(Penalty(PenaltyKind::log, 1.0).weight(1.0) == doctest::Approx(0.5));
  // phi(u) = u / (1 + a u / 2) gives phi'(u) = 1 / (1 + a u / 2)^2.
  CHECK(Penalty(PenaltyKind::rat, 1.0).weight(1.0) ==
        doctest::Approx(1.0 / 2.25));
  CHECK_THROWS_AS(Penalty::abs().weight(0.0), std::domain_error);
  CHECK_THROWS_AS(Penalty(PenaltyKind::log, 1.0).weight(-1.0),
                  std::domain_error);
}

TEST_CASE("curvature at zero and convexity bound") {
  CHECK(Penalty(PenaltyKind::log, 0.2).curvature_at_zero() == -0.2);
  CHECK(Penalty::abs().curvature_at_zero() == 0.0);
  CHECK(Penalty(PenaltyKind::atan, 0.25).curvature_at_zero() == -0.25);

  CHECK(max_convex_a(4.0, 1) == 0.25);
  CHECK(max_convex_a(1.2, 5) == doctest::Approx(1.0 / 6.0));
  CHECK(max_convex_a(0.41, 16) == doctest::Approx(0.1524).epsilon(1e-3));
  CHECK_THROWS_AS(max_convex_a(0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(max_convex_a(1.0, 0), std::invalid_argument);

  CHECK(is_strictly_convex(Penalty(PenaltyKind::atan, 0.2), 4.0, 1));
  CHECK_FALSE(is_strictly_convex(Penalty(PenaltyKind::log, 0.25), 4.0, 1));
  CHECK(is_strictly_convex(Penalty::abs(), 1e6, 1000));
}

TEST_CASE("fractional shape parameter stays inside the bound") {
  const double a = shape_from_fraction(1.0, 0.41, 16);
  CHECK(a < max_convex_a(0.41, 16));
  CHECK(a == doctest::Approx(max_convex_a(0.41, 16)).epsilon(1e-8));
  CHECK(shape_from_fraction(0.5, 2.0, 2) == doctest::Approx(0.125));
  CHECK(is_strictly_convex(penalty_from_fraction(PenaltyKind::atan, 1.0, 0.41, 16),
                           0.41, 16));
  CHECK_THROWS_AS(shape_from_fraction(1.5, 1.0, 1), std::invalid_argument);
  CHECK(penalty_from_fraction(PenaltyKind::abs, 1.0, 1.0, 1).kind() ==
        PenaltyKind::abs);
}

TEST_CASE("penalty invariants over random samples") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> ua(0.01, 3.0);
  std::uniform_real_distribution<double> ux(-50.0, 50.0);
  std::uniform_real_distribution<double> ut(0.0, 1.0);
  std::uniform_real_distribution<double> ulog(std::log(1e-6), std::log(1e3));

  for (int trial = 0; trial < 200; ++trial) {
    const double a = ua(rng);
    for (auto kind : kAllKinds) {
      const Penalty p(kind, a);
      const double x = ux(rng);
      CHECK(p.value(-x) == p.value(x));
      CHECK(p.value(0.0) == 0.0);
      // unit slope at zero
      const double h = 1e-8;
      CHECK(std::fabs((p.value(h) - p.value(0.0)) / h - 1.0) <= 1e-6);
      // monotone and concave on (0, inf)
      double x1 = std::fabs(ux(rng)), x2 = std::fabs(ux(rng));
      if (x1 > x2) std::swap(x1, x2);
      CHECK(p.value(x1) <= p.value(x2));
      const double t = ut(rng);
      CHECK(p.value(t * x1 + (1 - t) * x2) >=
            t * p.value(x1) + (1 - t) * p.value(x2) - 1e-12);
      // weight * u == deriv
      const double u = std::exp(ulog(rng));
      CHECK(std::fabs(p.weight(u) * u - p.deriv(u)) <=
            1e-12 * std::fabs(p.deriv(u)));
      CHECK(p.deriv(-u) == -p.deriv(u));
      CHECK(p.deriv(u) > 0.0);
    }
  }
}

TEST_CASE("derivative matches finite differences of the value") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ua(0.01, 2.0);
  std::uniform_real_distribution<double> ux(0.05, 20.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double a = ua(rng), x = ux(rng), h = 1e-6;
    for (auto kind : kNonConvex) {
      const Penalty p(kind, a);
      const double fd = (p.value(x + h) - p.value(x - h)) / (2 * h);
      CHECK(p.deriv(x) == doctest::Approx(fd).epsilon(1e-7));
      const double fd2 = (p.deriv(x + h) - p.deriv(x - h)) / (2 * h);
      CHECK(p.second_deriv(x) ==
            doctest::Approx(fd2).epsilon(1e-5).scale(1e-8));
    }
  }
}

TEST_CASE("second difference at 0+ converges to curvature_at_zero") {
  for (double a : {0.05, 0.2, 0.7, 2.0}) {
    for (auto kind : kNonConvex) {
      const Penalty p(kind, a);
      const double h = 1e-6;
      // one-sided second difference on [0, 2h]
      const double d2 = (p.value(2 * h) - 2 * p.value(h) + p.value(0.0)) / (h * h);
      CHECK(std::fabs(d2 - p.curvature_at_zero()) <= 1e-4);
    }
  }
}

TEST_CASE("penalty ordering atan <= rat <= log <= abs") {
  for (double a : {0.01, 0.2, 1.0, 5.0}) {
    const Penalty at(PenaltyKind::atan, a), ra(PenaltyKind::rat, a),
        lg(PenaltyKind::log, a);
    for (double x = 0.0; x <= 100.0; x += 0.01) {
      CHECK(at.value(x) <= ra.value(x) + 1e-12);
      CHECK(ra.value(x) <= lg.value(x) + 1e-12);
      CHECK(lg.value(x) <= x + 1e-12);
    }
  }
}

TEST_CASE("small-a limit approaches |x| quadratically in x") {
  const double a = 1e-4;
  for (auto kind : kNonConvex) {
    const Penalty p(kind, a);
    // fit C at x = 1, then check the bound on a grid (with slack 2x)
    const double C = std::fabs(p.value(1.0) - 1.0) / a;
    for (double x = 0.1; x <= 10.0; x += 0.1)
      CHECK(std::fabs(p.value(x) - x) <= 2.0 * C * a * x * x + 1e-15);
    CHECK(C <= 1.0);
  }
}
