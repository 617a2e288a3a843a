#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "doctest.h"
#include "ogs/ogs.hpp"
#include "ogs/shrinkage.hpp"
#include "oracles.hpp"

using namespace ogs;
using C = std::complex<double>;

namespace {

OgsOptions iters(int n) {
  OgsOptions o;
  o.iterations = n;
  return o;
}

std::vector<double> noisy_bursts(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i)
    y[i] = g(rng) + ((i / 8) % 3 == 0 ? 4.0 : 0.0);
  return y;
}

}  // namespace

TEST_CASE("config validation") {
  CHECK_THROWS_AS(OgsConfig(1.0, {1, 5}, Penalty(PenaltyKind::atan, 0.2)),
                  std::invalid_argument);
  CHECK_NOTHROW(OgsConfig(1.0, {1, 5}, Penalty(PenaltyKind::atan, 0.199)));
  CHECK_THROWS_AS(OgsConfig(0.0, {1, 5}, Penalty::abs()), std::invalid_argument);
  CHECK_THROWS_AS(OgsConfig(1.0, {1, 0}, Penalty::abs()), std::invalid_argument);
  CHECK_THROWS_AS(OgsConfig(1.0, {1, 2}, Penalty::abs(), iters(0)),
                  std::invalid_argument);
  OgsOptions bad_eps;
  bad_eps.epsilon = 0.0;
  CHECK_THROWS_AS(OgsConfig(1.0, {1, 2}, Penalty::abs(), bad_eps),
                  std::invalid_argument);
  CHECK(GroupShape::parse("5") == GroupShape{1, 5});
  CHECK(GroupShape::parse("8x2") == GroupShape{8, 2});
  CHECK(GroupShape{1, 5}.to_string() == "1x5");
  CHECK_THROWS_AS(GroupShape::parse("0x3"), std::invalid_argument);
  CHECK_THROWS_AS(GroupShape::parse("abc"), std::invalid_argument);
  const auto s = OgsConfig::from_fraction(2.0, {1, 4}, PenaltyKind::log, 0.5).scaled(3.0);
  CHECK(s.lambda() == 6.0);
  CHECK(s.penalty().a() == doctest::Approx(0.5 / 8.0 / 3.0));
}

TEST_CASE("cost function examples") {
  // a = 0.5 sits on the convexity bound for lambda = 1, K = 2, so this goes
  // through the unvalidated overload.
  const Penalty lg(PenaltyKind::log, 0.5);
  const std::vector<double> y{1, 1, 1}, x{1, 0, 0};
  const auto F = [&](const std::vector<double>& a, const std::vector<double>& b) {
    return ogs_cost(std::span<const double>(a), std::span<const double>(b), 1.0, 2, lg);
  };
  CHECK(F(y, x) == doctest::Approx(2.6218604324326575).epsilon(1e-14));
  CHECK(F(y, x) == doctest::Approx(1.0 + 4.0 * std::log(1.5)));
  const std::vector<double> z(4, 0.0);
  CHECK(F(z, z) == 0.0);
  const OgsConfig log2(1.0, {1, 2}, Penalty(PenaltyKind::log, 0.49));
  const OgsConfig abs2(2.0, {1, 1}, Penalty::abs());
  CHECK(ogs_cost(std::vector<double>{3}, std::vector<double>{1}, abs2) == 4.0);
  CHECK_THROWS_AS(ogs_cost(y, std::vector<double>{1, 2}, log2),
                  std::invalid_argument);
}

TEST_CASE("majorizer") {
  CHECK(majorizer_q(Penalty::abs(), 2.0, 1.0) == 2.5);
  CHECK_THROWS_AS(majorizer_q(Penalty::abs(), 1.0, 0.0), std::domain_error);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-20.0, 20.0), ua(0.01, 2.0);
  for (int i = 0; i < 2000; ++i) {
    const double x = u(rng), v = u(rng), a = ua(rng);
    for (auto kind : {PenaltyKind::abs, PenaltyKind::log, PenaltyKind::atan,
                      PenaltyKind::rat}) {
      const Penalty p(kind, a);
      CHECK(majorizer_q(p, x, v) - p.value(x) >= -1e-12);
      CHECK(majorizer_q(p, v, v) == doctest::Approx(p.value(v)).epsilon(1e-13));
    }
  }
}

TEST_CASE("all-zero input stays zero") {
  const std::vector<double> y(20, 0.0);
  const auto res = ogs_denoise(y, OgsConfig(1.0, {1, 3}, Penalty::abs()));
  for (double v : res.estimate) CHECK(v == 0.0);
  CHECK(res.cost_trace.size() == 25);
  for (double c : res.cost_trace) CHECK(c == 0.0);
  CHECK(res.support_size_trace.back() == 0);
}

TEST_CASE("empty input") {
  const auto res = ogs_denoise(std::vector<double>{}, OgsConfig(1.0, {1, 3}, Penalty::abs()));
  CHECK(res.estimate.empty());
}

TEST_CASE("non-finite input is rejected") {
  const std::vector<double> y{1.0, NAN};
  CHECK_THROWS_AS(ogs_denoise(y, OgsConfig(1.0, {1, 2}, Penalty::abs())),
                  std::invalid_argument);
  CHECK_THROWS_AS(ogs_denoise(y, OgsConfig(1.0, {2, 2}, Penalty::abs())),
                  std::invalid_argument);
}

TEST_CASE("K = 1 reduces to the scalar threshold") {
  const std::vector<double> y{5.0, -5.0, 3.0};
  const auto soft = ogs_denoise(y, OgsConfig(4.0, {1, 1}, Penalty::abs(), iters(200)));
  CHECK(soft.estimate[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(soft.estimate[1] == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(std::fabs(soft.estimate[2]) <= 1e-6);

  for (auto kind : {PenaltyKind::log, PenaltyKind::atan, PenaltyKind::rat}) {
    const Penalty p(kind, 0.2);
    const ThresholdProblem tp(4.0, p);
    const std::vector<double> ys{6.0, -7.5, 2.0, 0.0, 12.0, -3.0};
    const auto res = ogs_denoise(ys, OgsConfig(4.0, {1, 1}, p, iters(200)));
    for (std::size_t i = 0; i < ys.size(); ++i)
      CHECK(std::fabs(res.estimate[i] - scalar_threshold(tp, ys[i])) <= 1e-6);
  }
}

TEST_CASE("cost trace is non-increasing and ends at the final cost") {
  const auto y = noisy_bursts(200, 3);
  for (auto kind : {PenaltyKind::abs, PenaltyKind::log, PenaltyKind::atan,
                    PenaltyKind::rat}) {
    const auto cfg = OgsConfig::from_fraction(1.5, {1, 4}, kind, 1.0, iters(60));
    const auto res = ogs_denoise(y, cfg);
    REQUIRE(res.cost_trace.size() == 60);
    CHECK(res.cost_trace[0] <= res.initial_cost + 1e-12);
    CHECK(res.initial_cost == doctest::Approx(ogs_cost(y, y, cfg)));
    for (std::size_t k = 1; k < res.cost_trace.size(); ++k)
      CHECK(res.cost_trace[k] <= res.cost_trace[k - 1] + 1e-12);
    CHECK(res.cost_trace.back() ==
          doctest::Approx(ogs_cost(y, res.estimate, cfg)).epsilon(1e-12));
  }
}

TEST_CASE("estimates obey sign, magnitude and zero preservation") {
  auto y = noisy_bursts(300, 8);
  y[5] = 0.0;
  y[100] = 0.0;
  const auto cfg = OgsConfig::from_fraction(1.2, {1, 5}, PenaltyKind::atan, 1.0,
                                            iters(100));
  const auto res = ogs_denoise(y, cfg);
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double x = res.estimate[i];
    if (y[i] == 0.0) CHECK(x == 0.0);
    if (y[i] > 0.0) CHECK(x >= 0.0);
    if (y[i] < 0.0) CHECK(x <= 0.0);
    CHECK(std::fabs(x) <= std::fabs(y[i]));
  }
  // support only shrinks
  for (std::size_t k = 1; k < res.support_size_trace.size(); ++k)
    CHECK(res.support_size_trace[k] <= res.support_size_trace[k - 1]);
}

TEST_CASE("complex input keeps phase") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  std::vector<C> y(128);
  for (auto& v : y) v = C(g(rng), g(rng)) * 2.0;
  const auto cfg = OgsConfig::from_fraction(2.0, {1, 3}, PenaltyKind::rat, 0.9);
  const auto res = ogs_denoise(y, cfg);
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (res.estimate[i] == C{}) continue;
    CHECK(std::arg(res.estimate[i]) == doctest::Approx(std::arg(y[i])).epsilon(1e-12));
    CHECK(std::abs(res.estimate[i]) <= std::abs(y[i]));
  }
  for (std::size_t k = 1; k < res.cost_trace.size(); ++k)
    CHECK(res.cost_trace[k] <= res.cost_trace[k - 1] + 1e-12);
}

TEST_CASE("complex signal with zero imaginary part matches the real run") {
  const auto y = noisy_bursts(64, 10);
  std::vector<C> yc(y.begin(), y.end());
  const auto cfg = OgsConfig::from_fraction(1.0, {1, 3}, PenaltyKind::log, 0.7);
  const auto a = ogs_denoise(y, cfg);
  const auto b = ogs_denoise(yc, cfg);
  for (std::size_t i = 0; i < y.size(); ++i) {
    CHECK(b.estimate[i].real() == doctest::Approx(a.estimate[i]).epsilon(1e-13));
    CHECK(b.estimate[i].imag() == 0.0);
  }
}

TEST_CASE("scale covariance of the scaled config") {
  const auto y = noisy_bursts(100, 12);
  std::vector<double> y3(y);
  for (double& v : y3) v *= 3.0;
  const auto cfg = OgsConfig::from_fraction(1.0, {1, 4}, PenaltyKind::atan, 1.0);
  const auto a = ogs_denoise(y, cfg), b = ogs_denoise(y3, cfg.scaled(3.0));
  for (std::size_t i = 0; i < y.size(); ++i)
    CHECK(b.estimate[i] == doctest::Approx(3.0 * a.estimate[i]).epsilon(1e-10).scale(1e-14));
}

TEST_CASE("tolerance stop and untracked cost") {
  const auto y = noisy_bursts(100, 2);
  OgsOptions o;
  o.iterations = 1000;
  o.tolerance = 1e-6;
  o.track_cost = false;
  const auto res = ogs_denoise(y, OgsConfig(1.0, {1, 3}, Penalty::abs(), o));
  CHECK(res.iterations_run < 1000);
  CHECK(res.cost_trace.empty());
  CHECK(res.support_size_trace.size() == static_cast<std::size_t>(res.iterations_run));
}

TEST_CASE("optimality check") {
  const OgsConfig soft(4.0, {1, 1}, Penalty::abs());
  const std::vector<double> y{5.0, -5.0, 3.0, 0.5};
  const std::vector<double> xs{1.0, -1.0, 0.0, 0.0};
  CHECK(optimality_check(std::span<const double>(y), std::span<const double>(xs),
                         soft, 64, 1e-6, 1) >= -1e-8);
  const auto yn = noisy_bursts(16, 6);
  const auto cfg = OgsConfig::from_fraction(1.5, {1, 3}, PenaltyKind::atan, 0.9);
  CHECK(optimality_check(std::span<const double>(yn), std::span<const double>(yn),
                         cfg, 64, 1e-6, 1) < -0.1);

  const auto cfg200 = cfg.with_options(iters(200));
  const auto res = ogs_denoise(yn, cfg200);
  CHECK(optimality_check(std::span<const double>(yn),
                         std::span<const double>(res.estimate), cfg200, 64,
                         1e-6, 2) >= -1e-4);

  std::mt19937_64 rng(17);
  std::normal_distribution<double> g;
  std::vector<double> y4(4);
  for (double& v : y4) v = 2.0 * g(rng);
  const OgsConfig c4(1.0, {1, 2}, Penalty(PenaltyKind::atan, 0.4), iters(200));
  const auto r4 = ogs_denoise(y4, c4);
  CHECK(optimality_check(std::span<const double>(y4),
                         std::span<const double>(r4.estimate), c4, 64, 1e-6,
                         3) >= -1e-4);
}

TEST_CASE("unique minimizer just under the convexity bound") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g;
  std::vector<double> y(6);
  for (double& v : y) v = 1.5 * g(rng);
  const double lam = 1.0;
  const GroupShape shape{1, 2};
  const OgsConfig cfg(lam, shape, Penalty(PenaltyKind::atan, 0.999 / (2 * lam)),
                      iters(2000));
  auto F = [&](const std::vector<double>& x) { return ogs_cost(y, x, cfg); };
  std::vector<std::vector<double>> found;
  for (int restart = 0; restart < 10; ++restart) {
    std::vector<double> x0(y.size());
    for (double& v : x0) v = 3.0 * g(rng);
    found.push_back(oracle::random_line_descent(F, x0, 6000, 100 + restart));
  }
  const auto mm = ogs_denoise(y, cfg).estimate;
  for (const auto& x : found)
    for (std::size_t i = 0; i < y.size(); ++i) {
      CHECK(std::fabs(x[i] - found[0][i]) <= 1e-5);
      CHECK(std::fabs(x[i] - mm[i]) <= 1e-5);
    }
}
