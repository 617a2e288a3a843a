#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "mm_update.hpp"
#include "ogs/ogs.hpp"
#include "ogs/window_sum.hpp"

namespace ogs {

namespace {

std::ptrdiff_t group_len(const OgsConfig& cfg) {
  if (!cfg.shape().is_1d())
    throw std::invalid_argument("1D OGS needs a 1xK group shape, got " +
                                cfg.shape().to_string());
  return static_cast<std::ptrdiff_t>(cfg.shape().k2);
}

template <typename T>
void check_finite(std::span<const T> y) {
  for (const T& v : y)
    if (!std::isfinite(std::norm(v)))
      throw std::invalid_argument("OGS input contains non-finite samples");
}

}  // namespace

template <typename T>
OgsResult1D<T> ogs_denoise(std::span<const T> y, const OgsConfig& cfg) {
  const std::ptrdiff_t K = group_len(cfg);
  check_finite(y);
  const auto N = static_cast<std::ptrdiff_t>(y.size());
  const OgsOptions& opt = cfg.options();
  const Penalty& pen = cfg.penalty();
  const double lambda = cfg.lambda();

  OgsResult1D<T> res;
  res.estimate.assign(y.begin(), y.end());
  if (N == 0) return res;
  std::span<T> x(res.estimate);

  // b: group energies, then weights, indexed by group start + (K-1).
  std::vector<double> b(static_cast<std::size_t>(N + K - 1));
  std::vector<double> r(static_cast<std::size_t>(N));
  const std::ptrdiff_t groups = N + K - 1;

  auto energies = [&] {
    window_sum<double>([&](std::ptrdiff_t t) { return std::norm(x[t]); }, N,
                       -(K - 1), K, b.data(), groups);
  };
  auto cost_from_energies = [&] {
    double pen_sum = 0.0;
    for (double e : b) pen_sum += pen.value(std::sqrt(e));
    return detail::data_term(y, std::span<const T>(x)) + lambda * pen_sum;
  };

  for (int k = 0; k < opt.iterations; ++k) {
    energies();
    if (opt.track_cost) {
      const double c = cost_from_energies();
      if (k == 0)
        res.initial_cost = c;
      else
        res.cost_trace.push_back(c);
    }
    for (double& v : b) v = detail::group_weight(pen, v);
    window_sum<double>([&](std::ptrdiff_t t) { return b[t]; }, groups, 0, K,
                       r.data(), N);
    const auto st = detail::mm_update(y, x, r.data(), lambda, opt.epsilon);
    res.support_size_trace.push_back(st.support);
    res.iterations_run = k + 1;
    if (detail::converged(st, opt.tolerance)) break;
  }
  if (opt.track_cost) {
    energies();
    res.cost_trace.push_back(cost_from_energies());
  }
  return res;
}

template <typename T>
double ogs_cost(std::span<const T> y, std::span<const T> x, double lambda,
                std::size_t group_len, const Penalty& p) {
  if (y.size() != x.size())
    throw std::invalid_argument("ogs_cost: signal lengths differ");
  if (group_len == 0) throw std::invalid_argument("ogs_cost: group length 0");
  const auto K = static_cast<std::ptrdiff_t>(group_len);
  const auto N = static_cast<std::ptrdiff_t>(x.size());
  double pen_sum = 0.0;
  for (std::ptrdiff_t i = -(K - 1); i < N; ++i) {
    double e = 0.0;
    for (std::ptrdiff_t j = 0; j < K; ++j) {
      const std::ptrdiff_t t = i + j;
      if (t >= 0 && t < N) e += std::norm(x[t]);
    }
    pen_sum += p.value(std::sqrt(e));
  }
  return detail::data_term(y, x) + lambda * pen_sum;
}

template <typename T>
double ogs_cost(std::span<const T> y, std::span<const T> x,
                const OgsConfig& cfg) {
  return ogs_cost(y, x, cfg.lambda(),
                  static_cast<std::size_t>(group_len(cfg)), cfg.penalty());
}

double majorizer_q(const Penalty& p, double x, double v) {
  if (v == 0.0) throw std::domain_error("majorizer q(x, v) undefined at v = 0");
  const double av = std::fabs(v);
  const double d = p.deriv(av);
  return d / (2.0 * av) * x * x + p.value(v) - 0.5 * av * d;
}

template <typename T>
double optimality_check(std::span<const T> y, std::span<const T> x,
                        const OgsConfig& cfg, int trials, double step,
                        std::uint64_t seed) {
  if (!(step > 0.0)) throw std::invalid_argument("step must be > 0");
  const double f0 = ogs_cost(y, x, cfg);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<T> d(x.size());
  std::vector<T> probe(x.size());
  double worst = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    double nrm = 0.0;
    for (T& v : d) {
      if constexpr (std::is_same_v<T, double>)
        v = g(rng);
      else
        v = T(g(rng), g(rng));
      nrm += std::norm(v);
    }
    nrm = std::sqrt(nrm);
    for (std::size_t i = 0; i < d.size(); ++i)
      probe[i] = x[i] + (step / nrm) * d[i];
    const double q =
        (ogs_cost(y, std::span<const T>(probe), cfg) - f0) / step;
    worst = std::min(worst, q);
  }
  return worst;
}

template OgsResult1D<double> ogs_denoise(std::span<const double>,
                                         const OgsConfig&);
template OgsResult1D<std::complex<double>> ogs_denoise(
    std::span<const std::complex<double>>, const OgsConfig&);
template double ogs_cost(std::span<const double>, std::span<const double>,
                         const OgsConfig&);
template double ogs_cost(std::span<const std::complex<double>>,
                         std::span<const std::complex<double>>,
                         const OgsConfig&);
template double ogs_cost(std::span<const double>, std::span<const double>,
                         double, std::size_t, const Penalty&);
template double ogs_cost(std::span<const std::complex<double>>,
                         std::span<const std::complex<double>>, double,
                         std::size_t, const Penalty&);
template double optimality_check(std::span<const double>,
                                 std::span<const double>, const OgsConfig&,
                                 int, double, std::uint64_t);
template double optimality_check(std::span<const std::complex<double>>,
                                 std::span<const std::complex<double>>,
                                 const OgsConfig&, int, double, std::uint64_t);

}  // namespace ogs
