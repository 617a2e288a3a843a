#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "doctest.h"
#include "ogs/ogs2d.hpp"
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

Grid<double> random_grid(std::size_t r, std::size_t c, std::uint64_t seed,
                         double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Grid<double> out(r, c);
  for (double& v : out.data()) v = scale * g(rng);
  return out;
}

std::vector<std::vector<double>> nested(const Grid<double>& g) {
  std::vector<std::vector<double>> out(g.rows(), std::vector<double>(g.cols()));
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) out[i][j] = g(i, j);
  return out;
}

}  // namespace

TEST_CASE("2D cost examples") {
  const OgsConfig cfg(1.0, {2, 2}, Penalty::abs());
  const Grid<double> x(2, 2, {1, 2, 3, 4});
  const Grid<double> y(2, 2, 1.0);
  CHECK(ogs_cost_2d(y, x, cfg) == doctest::Approx(37.347707167719406).epsilon(1e-14));
  const Grid<double> z(3, 4);
  CHECK(ogs_cost_2d(z, z, cfg) == 0.0);
  CHECK_THROWS_AS(ogs_cost_2d(y, z, cfg), std::invalid_argument);

  const auto yr = random_grid(5, 6, 1), xr = random_grid(5, 6, 2);
  const OgsConfig c23(0.7, {2, 3}, Penalty(PenaltyKind::log, 0.1));
  CHECK(ogs_cost_2d(yr, xr, c23) ==
        doctest::Approx(oracle::enumerate_cost_2d(nested(yr), nested(xr), 2, 3,
                                                  c23.penalty(), 0.7)));
}

TEST_CASE("1xN grid matches the 1D code path exactly") {
  for (auto kind : {PenaltyKind::abs, PenaltyKind::atan}) {
    const auto y2 = random_grid(1, 300, 3, 2.0);
    const auto cfg = OgsConfig::from_fraction(1.3, {1, 5}, kind, 1.0, iters(40));
    for (int n : {1, 7, 40}) {
      const auto c = cfg.with_options(iters(n));
      const auto r2 = ogs_denoise_2d(y2, c);
      const auto r1 = ogs_denoise(y2.data(), c);
      CHECK(r2.estimate.data() == r1.estimate);
      CHECK(r2.cost_trace == r1.cost_trace);
      CHECK(r2.support_size_trace == r1.support_size_trace);
    }
    CHECK(ogs_cost_2d(y2, y2, cfg) == doctest::Approx(ogs_cost(y2.data(), y2.data(), cfg)));
  }
}

TEST_CASE("2D all zeros") {
  const Grid<C> y(4, 5);
  const auto res = ogs_denoise_2d(y, OgsConfig(1.0, {2, 2}, Penalty::abs()));
  CHECK(res.estimate == y);
}

TEST_CASE("K = (1,1) is the elementwise threshold") {
  const auto y = random_grid(4, 6, 9, 6.0);
  const Penalty p(PenaltyKind::atan, 0.2);
  const auto res = ogs_denoise_2d(y, OgsConfig(4.0, {1, 1}, p, iters(200)));
  const ThresholdProblem tp(4.0, p);
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double yi = y.data()[i];
    if (std::fabs(std::fabs(yi) - 4.0) < 1.0) continue;  // slow MM near |y| = lambda
    CHECK(std::fabs(res.estimate.data()[i] - scalar_threshold(tp, yi)) <= 1e-6);
  }
}

TEST_CASE("2D monotone cost, sign and magnitude properties") {
  auto y = random_grid(12, 20, 4, 1.0);
  for (std::size_t i = 3; i < 7; ++i)
    for (std::size_t j = 5; j < 12; ++j) y(i, j) += 5.0;
  y(0, 0) = 0.0;
  const auto cfg = OgsConfig::from_fraction(0.5, {2, 3}, PenaltyKind::atan, 1.0, iters(50));
  const auto res = ogs_denoise_2d(y, cfg);
  for (std::size_t k = 1; k < res.cost_trace.size(); ++k)
    CHECK(res.cost_trace[k] <= res.cost_trace[k - 1] + 1e-12);
  CHECK(res.estimate(0, 0) == 0.0);
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double yi = y.data()[i], xi = res.estimate.data()[i];
    CHECK(xi * yi >= 0.0);
    CHECK(std::fabs(xi) <= std::fabs(yi));
  }
  CHECK(res.cost_trace.back() ==
        doctest::Approx(ogs_cost_2d(y, res.estimate, cfg)).epsilon(1e-12));
}

TEST_CASE("2D complex keeps phase") {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g;
  Grid<C> y(9, 11);
  for (auto& v : y.data()) v = C(g(rng), g(rng));
  const auto cfg = OgsConfig::from_fraction(0.4, {3, 2}, PenaltyKind::log, 1.0);
  const auto res = ogs_denoise_2d(y, cfg);
  for (std::size_t i = 0; i < y.size(); ++i) {
    const C x = res.estimate.data()[i];
    if (x == C{}) continue;
    CHECK(std::arg(x) == doctest::Approx(std::arg(y.data()[i])).epsilon(1e-12));
  }
}

TEST_CASE("transposition symmetry") {
  const auto y = random_grid(7, 10, 12, 2.0);
  Grid<double> yt(10, 7);
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = 0; j < 10; ++j) yt(j, i) = y(i, j);
  const auto a = ogs_denoise_2d(y, OgsConfig::from_fraction(0.6, {2, 3}, PenaltyKind::rat, 1.0));
  const auto b = ogs_denoise_2d(yt, OgsConfig::from_fraction(0.6, {3, 2}, PenaltyKind::rat, 1.0));
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = 0; j < 10; ++j)
      CHECK(a.estimate(i, j) == doctest::Approx(b.estimate(j, i)).epsilon(1e-12));
}

TEST_CASE("translation invariance away from the borders") {
  const std::size_t R = 20, Cc = 24;
  Grid<double> y(R, Cc), ys(R, Cc);
  std::mt19937_64 rng(13);
  std::normal_distribution<double> g;
  for (std::size_t i = 6; i < 12; ++i)
    for (std::size_t j = 6; j < 14; ++j) {
      const double v = 3.0 + g(rng);
      y(i, j) = v;
      ys(i + 1, j + 1) = v;
    }
  const auto cfg = OgsConfig::from_fraction(0.8, {2, 3}, PenaltyKind::atan, 1.0);
  const auto a = ogs_denoise_2d(y, cfg), b = ogs_denoise_2d(ys, cfg);
  for (std::size_t i = 0; i + 1 < R; ++i)
    for (std::size_t j = 0; j + 1 < Cc; ++j)
      CHECK(std::fabs(a.estimate(i, j) - b.estimate(i + 1, j + 1)) <= 1e-10);
}

TEST_CASE("2D single row embedded in zeros behaves like 1D") {
  const auto row = random_grid(1, 50, 15, 2.0);
  Grid<double> y(5, 50);
  for (std::size_t j = 0; j < 50; ++j) y(2, j) = row(0, j);
  const auto cfg = OgsConfig::from_fraction(1.0, {1, 4}, PenaltyKind::log, 1.0);
  const auto a = ogs_denoise_2d(y, cfg);
  const auto b = ogs_denoise(row.data(), cfg);
  for (std::size_t j = 0; j < 50; ++j) {
    CHECK(a.estimate(2, j) == doctest::Approx(b.estimate[j]).epsilon(1e-13));
    CHECK(a.estimate(0, j) == 0.0);
  }
}
