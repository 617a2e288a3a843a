#include "ogs/ogs2d.hpp"

#include <cmath>
#include <stdexcept>

#include "mm_update.hpp"
#include "ogs/window_sum.hpp"

namespace ogs {

template <typename T>
OgsResult2D<T> ogs_denoise_2d(const Grid<T>& y, const OgsConfig& cfg) {
  for (const T& v : y.data())
    if (!std::isfinite(std::norm(v)))
      throw std::invalid_argument("OGS input contains non-finite samples");
  const auto N1 = static_cast<std::ptrdiff_t>(y.rows());
  const auto N2 = static_cast<std::ptrdiff_t>(y.cols());
  const auto K1 = static_cast<std::ptrdiff_t>(cfg.shape().k1);
  const auto K2 = static_cast<std::ptrdiff_t>(cfg.shape().k2);
  const OgsOptions& opt = cfg.options();
  const Penalty& pen = cfg.penalty();
  const double lambda = cfg.lambda();

  OgsResult2D<T> res;
  res.estimate = y;
  if (y.empty()) return res;
  std::span<T> x(res.estimate.data());
  std::span<const T> yv(y.data());

  const std::ptrdiff_t G1 = N1 + K1 - 1;
  const std::ptrdiff_t G2 = N2 + K2 - 1;
  std::vector<double> tmp(static_cast<std::size_t>(N1 * G2));
  std::vector<double> E(static_cast<std::size_t>(G1 * G2));
  std::vector<double> r(static_cast<std::size_t>(N1 * N2));

  auto energies = [&] {
    for (std::ptrdiff_t i = 0; i < N1; ++i) {
      const T* xr = x.data() + i * N2;
      window_sum<double>([&](std::ptrdiff_t t) { return std::norm(xr[t]); },
                         N2, -(K2 - 1), K2, tmp.data() + i * G2, G2);
    }
    for (std::ptrdiff_t c = 0; c < G2; ++c)
      window_sum<double>([&](std::ptrdiff_t t) { return tmp[t * G2 + c]; }, N1,
                         -(K1 - 1), K1, E.data() + c, G1, G2);
  };
  auto back_sums = [&] {
    for (std::ptrdiff_t c = 0; c < G2; ++c)
      window_sum<double>([&](std::ptrdiff_t t) { return E[t * G2 + c]; }, G1,
                         0, K1, tmp.data() + c, N1, G2);
    for (std::ptrdiff_t i = 0; i < N1; ++i) {
      const double* tr = tmp.data() + i * G2;
      window_sum<double>([&](std::ptrdiff_t t) { return tr[t]; }, G2, 0, K2,
                         r.data() + i * N2, N2);
    }
  };
  auto cost_from_energies = [&] {
    double pen_sum = 0.0;
    for (double e : E) pen_sum += pen.value(std::sqrt(e));
    return detail::data_term(yv, std::span<const T>(x)) + lambda * pen_sum;
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
    for (double& v : E) v = detail::group_weight(pen, v);
    back_sums();
    const auto st = detail::mm_update(yv, x, r.data(), lambda, opt.epsilon);
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
double ogs_cost_2d(const Grid<T>& y, const Grid<T>& x, const OgsConfig& cfg) {
  if (!y.same_shape(x))
    throw std::invalid_argument("ogs_cost_2d: array shapes differ");
  const auto N1 = static_cast<std::ptrdiff_t>(x.rows());
  const auto N2 = static_cast<std::ptrdiff_t>(x.cols());
  const auto K1 = static_cast<std::ptrdiff_t>(cfg.shape().k1);
  const auto K2 = static_cast<std::ptrdiff_t>(cfg.shape().k2);
  double pen_sum = 0.0;
  for (std::ptrdiff_t i1 = -(K1 - 1); i1 < N1; ++i1) {
    for (std::ptrdiff_t i2 = -(K2 - 1); i2 < N2; ++i2) {
      double e = 0.0;
      for (std::ptrdiff_t j1 = 0; j1 < K1; ++j1) {
        const std::ptrdiff_t t1 = i1 + j1;
        if (t1 < 0 || t1 >= N1) continue;
        for (std::ptrdiff_t j2 = 0; j2 < K2; ++j2) {
          const std::ptrdiff_t t2 = i2 + j2;
          if (t2 >= 0 && t2 < N2) e += std::norm(x(t1, t2));
        }
      }
      pen_sum += cfg.penalty().value(std::sqrt(e));
    }
  }
  return detail::data_term(std::span<const T>(y.data()),
                           std::span<const T>(x.data())) +
         cfg.lambda() * pen_sum;
}

template OgsResult2D<double> ogs_denoise_2d(const Grid<double>&,
                                            const OgsConfig&);
template OgsResult2D<std::complex<double>> ogs_denoise_2d(
    const Grid<std::complex<double>>&, const OgsConfig&);
template double ogs_cost_2d(const Grid<double>&, const Grid<double>&,
                            const OgsConfig&);
template double ogs_cost_2d(const Grid<std::complex<double>>&,
                            const Grid<std::complex<double>>&,
                            const OgsConfig&);

}  // namespace ogs
