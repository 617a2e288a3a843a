#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ogs/config.hpp"

namespace ogs {

// ---- signals and noise ----

struct Burst {
  std::size_t start = 0;
  std::size_t length = 0;
};

struct GroupSparseSignal {
  std::vector<double> samples;
  std::vector<Burst> bursts;
};

struct GroupSparseSpec {
  std::size_t n = 100;
  std::size_t n_groups = 2;
  std::size_t len_min = 10;
  std::size_t len_max = 20;
  /// Magnitudes vary smoothly between these; amp_min must be > 0 so every
  /// burst sample is nonzero.
  double amp_min = 1.0;
  double amp_max = 5.0;
};

/// Zero signal with n_groups disjoint bursts separated by at least one zero.
/// Each burst has a random length in [len_min, len_max], a random sign, and
/// magnitude amp_min + (amp_max - amp_min)(1 + sin(2 pi f t + p)) / 2 with
/// random f and p. Throws std::invalid_argument when the bursts cannot be
/// placed after a bounded number of length draws.
GroupSparseSignal gen_group_sparse(const GroupSparseSpec& spec, std::uint64_t seed);

struct NoisySignal {
  std::vector<double> samples;
  double sigma = 0.0;
};

/// y = x + w with w ~ N(0, sigma^2) i.i.d.
NoisySignal add_awgn(std::span<const double> x, double sigma, std::uint64_t seed);
/// sigma = ||x|| / sqrt(n 10^(snr_db / 10)). Throws for a zero signal.
NoisySignal add_awgn_snr(std::span<const double> x, double snr_db,
                         std::uint64_t seed);

// ---- metrics and simple estimators ----

/// 10 log10(||x||^2 / ||x - x_hat||^2); +infinity when the estimate is exact.
/// Throws std::invalid_argument for a zero reference or a length mismatch.
double snr_db(std::span<const double> reference, std::span<const double> estimate);

/// median(|y - median(y)|) / 0.6745. Needs at least 256 samples. Returns 0
/// for a constant signal; callers should warn in that case.
double estimate_sigma_mad(std::span<const double> y);

enum class ThresholdMode { soft, hard };

/// Elementwise soft (sign(y) max(|y| - T, 0)) or hard (y 1{|y| > T}).
std::vector<double> scalar_threshold_denoise(std::span<const double> y,
                                             double threshold, ThresholdMode mode);

/// Threshold T whose output std on unit Gaussian noise is alpha, from the
/// closed-form second moments
///   hard: 2 (T phi(T) + Q(T)),  soft: 2 ((1 + T^2) Q(T) - T phi(T)).
double threshold_for_alpha(double alpha, ThresholdMode mode);

/// Empirical Wiener gain: noisy * |pilot|^2 / (|pilot|^2 + sigma^2) where
/// sigma is the noise std of one coefficient (E|noise|^2 = sigma^2 for
/// complex coefficients). Throws for sigma <= 0 or a length mismatch.
std::vector<double> empirical_wiener_post(std::span<const double> noisy,
                                          std::span<const double> pilot,
                                          double sigma);
std::vector<std::complex<double>> empirical_wiener_post(
    std::span<const std::complex<double>> noisy,
    std::span<const std::complex<double>> pilot, double sigma);

// ---- audio ----

struct Audio {
  std::vector<double> samples;
  int sample_rate = 0;
  /// Set when a multi-channel file was averaged down to mono.
  bool downmixed = false;
};

/// 16-bit PCM WAV. Samples are scaled to [-1, 1). Stereo (or more) is
/// averaged to mono. Throws std::runtime_error for unsupported encodings or
/// malformed headers.
Audio read_wav(const std::string& path);
/// Mono 16-bit PCM; values are clamped to [-1, 1) and truncated.
void write_wav(const std::string& path, std::span<const double> samples,
               int sample_rate);

// ---- group-sparse benchmark ----

struct BenchmarkSpec {
  GroupSparseSpec signal;
  double snr_db = 10.0;
  std::size_t group_len = 5;
  int iterations = 25;
  /// Empty: pick lambda / T on a log grid to maximize SNR. Otherwise every
  /// method is set to attenuate pure noise to this fraction of sigma.
  std::optional<double> alpha;
  std::size_t grid_points = 40;
  double grid_lo = 0.1;
  double grid_hi = 10.0;
  /// Monte-Carlo budget for the alpha-mode calibration of the OGS variants.
  std::size_t calibration_samples = 3 * (std::size_t{1} << 20);
  std::uint64_t calibration_seed = 1;
};

struct SnrReport {
  std::uint64_t seed = 0;
  double input_snr_db = 0.0;
  double sigma = 0.0;
  /// Method name -> output SNR (dB).
  std::map<std::string, double> output_snr_db;
  /// Method name -> parameter used (T or lambda, absolute units).
  std::map<std::string, double> parameter;
};

struct BenchmarkResult {
  std::vector<SnrReport> runs;
  /// Method name -> mean output SNR over runs.
  std::map<std::string, double> mean_snr_db;
  /// alpha mode: method name -> lambda or T in units of sigma.
  std::map<std::string, double> unit_parameter;
};

/// Methods: "hard", "soft", "ogs_abs", "ogs_log", "ogs_atan" (a = 1/(K
/// lambda) for log and atan). Every OGS output is checked for zero, sign and
/// magnitude preservation; a violation raises InvariantError.
BenchmarkResult benchmark_example1(const std::vector<std::uint64_t>& seeds,
                                   const BenchmarkSpec& spec);

/// n log-spaced values from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t n);

}  // namespace ogs
