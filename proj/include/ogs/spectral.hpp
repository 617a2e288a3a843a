#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "ogs/config.hpp"
#include "ogs/grid.hpp"

namespace ogs {

/// STFT geometry: frames of frame_len samples advanced by frame_len / 2, the
/// same square-root periodic Hann window for analysis and synthesis. The
/// squared window overlap-adds to exactly one, so istft(stft(s)) = s.
class SpectrogramPlan {
 public:
  /// frame_len must be even and >= 2.
  explicit SpectrogramPlan(std::size_t frame_len);

  /// 32 ms frames rounded to an even length (512 at 16 kHz, 256 at 8 kHz).
  static SpectrogramPlan for_sample_rate(double sample_rate);

  std::size_t frame_len() const { return frame_len_; }
  std::size_t hop() const { return frame_len_ / 2; }
  std::size_t bins() const { return frame_len_ / 2 + 1; }
  const std::vector<double>& window() const { return window_; }
  double window_norm() const;

  /// max_n |w(n)^2 + w(n + hop)^2 - 1|.
  double cola_error() const;

  /// Frames needed for a signal of n samples: every sample is covered by
  /// two frames, the first starting one hop before the signal.
  std::size_t frames_for(std::size_t n) const;

  /// Complex std of the STFT coefficients of white noise with time-domain
  /// std sigma (unnormalized transform): sigma * ||w||_2.
  double coefficient_sigma(double sigma) const { return sigma * window_norm(); }

 private:
  std::size_t frame_len_;
  std::vector<double> window_;
};

/// bins x frames half-spectrum. Row k is frequency bin k, column f is
/// frame f, matching the (spectral, temporal) axes of 2D OGS.
struct Spectrogram {
  SpectrogramPlan plan;
  Grid<std::complex<double>> coeffs;
  std::size_t signal_length = 0;
};

/// Throws std::invalid_argument for an empty signal.
Spectrogram stft(std::span<const double> s, const SpectrogramPlan& plan);

/// Weighted overlap-add inverse; returns exactly signal_length samples.
/// Throws std::invalid_argument when the coefficient grid does not match the
/// plan and signal length.
std::vector<double> istft(const Spectrogram& S);

struct SpeechOptions {
  /// Empirical Wiener post-processing with the OGS output as the pilot.
  bool ewp = false;
};

struct SpeechResult {
  std::vector<double> signal;
  /// STFT-domain parameters actually used.
  double coefficient_sigma = 0.0;
  double lambda_stft = 0.0;
  int iterations_run = 0;
};

/// x = istft(ogs_2d(stft(s))). cfg is expressed for unit noise: its lambda
/// is in units of the coefficient noise std, and the run uses
/// cfg.scaled(plan.coefficient_sigma(sigma)). sigma is the time-domain
/// noise std.
SpeechResult denoise_speech(std::span<const double> s,
                            const SpectrogramPlan& plan, const OgsConfig& cfg,
                            double sigma, const SpeechOptions& options = {});

/// Time-domain noise std from the median absolute deviation of the real and
/// imaginary parts of the upper quarter of the STFT bins, where speech-like
/// signals carry little energy. Returns 0 for a constant signal.
double estimate_sigma_stft(std::span<const double> s, const SpectrogramPlan& plan);

}  // namespace ogs
