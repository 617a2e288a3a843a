#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ogs/config.hpp"
#include "ogs/grid.hpp"

namespace ogs {

struct SureOptions {
  /// Finite-difference step; unset selects 0.01 sigma.
  std::optional<double> delta;
  /// Probes per part (real, and imaginary for complex data), averaged.
  int probes = 1;
  std::uint64_t seed = 1;
};

struct SureEstimate {
  double lambda = 0.0;
  /// Unbiased estimate of ||f(y) - x||^2 (a total, not a mean).
  double estimated_mse = 0.0;
  /// Monte-Carlo estimate of the divergence of f at y (sum over all real
  /// degrees of freedom).
  double divergence = 0.0;
  /// Standard error of the divergence over probes (0 with one probe).
  double divergence_stderr = 0.0;
  double residual_sq = 0.0;
  double perturbation_scale = 0.0;
  std::uint64_t seed = 0;
  /// Real degrees of freedom: N for real data, 2N for complex.
  std::size_t dof = 0;
  /// Number of (possibly complex) samples.
  std::size_t samples = 0;

  double mse_per_sample() const {
    return samples ? estimated_mse / static_cast<double>(samples) : 0.0;
  }
};

template <typename T>
using Denoiser = std::function<std::vector<T>(std::span<const T>)>;

/// Monte-Carlo SURE for any denoiser f of data y = x + noise, where every
/// real degree of freedom carries independent N(0, sigma^2) noise (complex
/// samples: sigma per real and per imaginary part):
///   SURE = ||f(y) - y||^2 + 2 sigma^2 div f(y) - M sigma^2.
/// div is estimated with Gaussian probes b as <b, f(y + delta b) - f(y)> /
/// delta; complex data use one probe on the real parts and one on the
/// imaginary parts and add the two partial divergences.
template <typename T>
SureEstimate mc_sure(std::span<const T> y, double sigma, const Denoiser<T>& f,
                     const SureOptions& options = {});

/// SURE of 1D OGS (cfg.shape() must be 1xK).
template <typename T>
SureEstimate mc_sure(std::span<const T> y, double sigma, const OgsConfig& cfg,
                     const SureOptions& options = {});

/// SURE of 2D OGS.
template <typename T>
SureEstimate mc_sure_2d(const Grid<T>& y, double sigma, const OgsConfig& cfg,
                        const SureOptions& options = {});

/// Penalty family and group shape for a lambda scan; a = beta / (K1 K2
/// lambda) is recomputed per lambda.
struct ScanTemplate {
  GroupShape shape;
  PenaltyKind kind = PenaltyKind::atan;
  double beta = 1.0;
  OgsOptions options;

  OgsConfig at(double lambda) const {
    return OgsConfig::from_fraction(lambda, shape, kind, beta, options);
  }
};

struct SureScan {
  std::vector<SureEstimate> estimates;
  std::size_t argmin = 0;
  double best_lambda() const { return estimates.at(argmin).lambda; }
};

/// mc_sure at every lambda of an increasing, non-empty grid. All grid
/// points share the probe seed, so differences along the grid are not
/// masked by probe noise. 1D shapes on a vector, 2D shapes on a Grid.
template <typename T>
SureScan sure_scan(std::span<const T> y, double sigma,
                   const std::vector<double>& lambdas,
                   const ScanTemplate& tmpl, const SureOptions& options = {});
template <typename T>
SureScan sure_scan_2d(const Grid<T>& y, double sigma,
                      const std::vector<double>& lambdas,
                      const ScanTemplate& tmpl, const SureOptions& options = {});

}  // namespace ogs
