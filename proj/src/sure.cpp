#include "ogs/sure.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "ogs/ogs.hpp"
#include "ogs/ogs2d.hpp"

namespace ogs {

namespace {

void check_sure_args(double sigma, const SureOptions& o) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw std::invalid_argument("SURE: sigma must be positive");
  if (o.delta && (!(*o.delta > 0.0) || !std::isfinite(*o.delta)))
    throw std::invalid_argument("SURE: delta must be positive");
  if (o.probes < 1) throw std::invalid_argument("SURE: need at least one probe");
}

// <b, part(df)> / delta for one probe on one part (0 = real, 1 = imaginary).
template <typename T>
double probe_divergence(std::span<const T> y, const std::vector<T>& fy,
                        const Denoiser<T>& f, double delta, int part,
                        std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<double> b(y.size());
  for (double& v : b) v = g(rng);
  std::vector<T> yp(y.begin(), y.end());
  for (std::size_t i = 0; i < yp.size(); ++i) {
    if constexpr (std::is_same_v<T, double>)
      yp[i] += delta * b[i];
    else
      yp[i] += part == 0 ? T(delta * b[i], 0.0) : T(0.0, delta * b[i]);
  }
  const auto fp = f(std::span<const T>(yp));
  double acc = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if constexpr (std::is_same_v<T, double>)
      acc += b[i] * (fp[i] - fy[i]);
    else
      acc += b[i] * (part == 0 ? (fp[i] - fy[i]).real() : (fp[i] - fy[i]).imag());
  }
  return acc / delta;
}

}  // namespace

template <typename T>
SureEstimate mc_sure(std::span<const T> y, double sigma, const Denoiser<T>& f,
                     const SureOptions& options) {
  check_sure_args(sigma, options);
  for (const T& v : y)
    if (!std::isfinite(std::norm(v)))
      throw std::invalid_argument("SURE: input contains non-finite samples");
  constexpr bool cx = !std::is_same_v<T, double>;
  const int parts = cx ? 2 : 1;

  SureEstimate est;
  est.perturbation_scale = options.delta.value_or(0.01 * sigma);
  est.seed = options.seed;
  est.samples = y.size();
  est.dof = y.size() * static_cast<std::size_t>(parts);

  const auto fy = f(y);
  if (fy.size() != y.size())
    throw std::invalid_argument("SURE: denoiser changed the signal length");
  for (std::size_t i = 0; i < y.size(); ++i) est.residual_sq += std::norm(fy[i] - y[i]);

  // Each probe contributes the sum of its per-part divergences.
  std::mt19937_64 rng(options.seed);
  std::vector<double> draws;
  for (int p = 0; p < options.probes; ++p) {
    double d = 0.0;
    for (int part = 0; part < parts; ++part)
      d += probe_divergence(y, fy, f, est.perturbation_scale, part, rng);
    draws.push_back(d);
  }
  double mean = 0.0;
  for (double d : draws) mean += d;
  mean /= static_cast<double>(draws.size());
  if (draws.size() > 1) {
    double ss = 0.0;
    for (double d : draws) ss += (d - mean) * (d - mean);
    est.divergence_stderr =
        std::sqrt(ss / static_cast<double>(draws.size() - 1) /
                  static_cast<double>(draws.size()));
  }
  est.divergence = mean;
  const double s2 = sigma * sigma;
  est.estimated_mse = est.residual_sq + 2.0 * s2 * est.divergence -
                      static_cast<double>(est.dof) * s2;
  return est;
}

template <typename T>
SureEstimate mc_sure(std::span<const T> y, double sigma, const OgsConfig& cfg,
                     const SureOptions& options) {
  const Denoiser<T> f = [&cfg](std::span<const T> v) {
    return ogs_denoise(v, cfg).estimate;
  };
  auto est = mc_sure(y, sigma, f, options);
  est.lambda = cfg.lambda();
  return est;
}

template <typename T>
SureEstimate mc_sure_2d(const Grid<T>& y, double sigma, const OgsConfig& cfg,
                        const SureOptions& options) {
  const std::size_t rows = y.rows(), cols = y.cols();
  const Denoiser<T> f = [&cfg, rows, cols](std::span<const T> v) {
    const Grid<T> g(rows, cols, std::vector<T>(v.begin(), v.end()));
    return std::move(ogs_denoise_2d(g, cfg).estimate.data());
  };
  auto est = mc_sure(std::span<const T>(y.data()), sigma, f, options);
  est.lambda = cfg.lambda();
  return est;
}

namespace {

void check_grid(const std::vector<double>& lambdas) {
  if (lambdas.empty()) throw std::invalid_argument("SURE scan: empty lambda grid");
  for (std::size_t i = 1; i < lambdas.size(); ++i)
    if (!(lambdas[i] > lambdas[i - 1]))
      throw std::invalid_argument("SURE scan: lambda grid must be increasing");
}

template <typename Run>
SureScan scan(const std::vector<double>& lambdas, Run run) {
  check_grid(lambdas);
  SureScan out;
  for (double lam : lambdas) {
    out.estimates.push_back(run(lam));
    if (out.estimates.back().estimated_mse <
        out.estimates[out.argmin].estimated_mse)
      out.argmin = out.estimates.size() - 1;
  }
  return out;
}

}  // namespace

template <typename T>
SureScan sure_scan(std::span<const T> y, double sigma,
                   const std::vector<double>& lambdas, const ScanTemplate& tmpl,
                   const SureOptions& options) {
  return scan(lambdas, [&](double lam) {
    return mc_sure(y, sigma, tmpl.at(lam), options);
  });
}

template <typename T>
SureScan sure_scan_2d(const Grid<T>& y, double sigma,
                      const std::vector<double>& lambdas,
                      const ScanTemplate& tmpl, const SureOptions& options) {
  return scan(lambdas, [&](double lam) {
    return mc_sure_2d(y, sigma, tmpl.at(lam), options);
  });
}

#define OGS_SURE_INSTANTIATE(T)                                                \
  template SureEstimate mc_sure(std::span<const T>, double,                   \
                                const Denoiser<T>&, const SureOptions&);      \
  template SureEstimate mc_sure(std::span<const T>, double, const OgsConfig&, \
                                const SureOptions&);                          \
  template SureEstimate mc_sure_2d(const Grid<T>&, double, const OgsConfig&,  \
                                   const SureOptions&);                       \
  template SureScan sure_scan(std::span<const T>, double,                     \
                              const std::vector<double>&,                     \
                              const ScanTemplate&, const SureOptions&);       \
  template SureScan sure_scan_2d(const Grid<T>&, double,                      \
                                 const std::vector<double>&,                  \
                                 const ScanTemplate&, const SureOptions&);

OGS_SURE_INSTANTIATE(double)
OGS_SURE_INSTANTIATE(std::complex<double>)

#undef OGS_SURE_INSTANTIATE

}  // namespace ogs
