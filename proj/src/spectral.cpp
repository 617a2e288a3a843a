#include "ogs/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>

#include "ogs/ogs2d.hpp"
#include "ogs/toolkit.hpp"

namespace ogs {

namespace {

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};
struct PlanDestroy {
  void operator()(fftw_plan p) const { fftw_destroy_plan(p); }
};
using PlanPtr = std::unique_ptr<std::remove_pointer_t<fftw_plan>, PlanDestroy>;

// One real buffer, one half-spectrum buffer, and the r2c / c2r plans between
// them. FFTW planning is not thread safe; plans here are built per call.
class RealFft {
 public:
  explicit RealFft(std::size_t n)
      : n_(n),
        real_(static_cast<double*>(fftw_malloc(sizeof(double) * n))),
        spec_(static_cast<fftw_complex*>(
            fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)))) {
    if (!real_ || !spec_) throw std::bad_alloc();
    const int len = static_cast<int>(n);
    forward_.reset(fftw_plan_dft_r2c_1d(len, real_.get(), spec_.get(), FFTW_ESTIMATE));
    inverse_.reset(fftw_plan_dft_c2r_1d(len, spec_.get(), real_.get(), FFTW_ESTIMATE));
    if (!forward_ || !inverse_) throw std::runtime_error("FFTW planning failed");
  }

  double* real() { return real_.get(); }
  std::complex<double>* spectrum() {
    return reinterpret_cast<std::complex<double>*>(spec_.get());
  }
  void forward() { fftw_execute(forward_.get()); }
  /// Unnormalized: the result is n times the inverse transform.
  void inverse() { fftw_execute(inverse_.get()); }
  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  std::unique_ptr<double, FftwFree> real_;
  std::unique_ptr<fftw_complex, FftwFree> spec_;
  PlanPtr forward_, inverse_;
};

}  // namespace

SpectrogramPlan::SpectrogramPlan(std::size_t frame_len) : frame_len_(frame_len) {
  if (frame_len < 2 || frame_len % 2 != 0)
    throw std::invalid_argument("STFT frame length must be even and >= 2, got " +
                                std::to_string(frame_len));
  window_.resize(frame_len);
  for (std::size_t n = 0; n < frame_len; ++n)
    window_[n] = std::sqrt(0.5 - 0.5 * std::cos(2.0 * std::numbers::pi *
                                                static_cast<double>(n) /
                                                static_cast<double>(frame_len)));
}

SpectrogramPlan SpectrogramPlan::for_sample_rate(double sample_rate) {
  if (!(sample_rate > 0.0)) throw std::invalid_argument("sample rate must be positive");
  auto len = static_cast<std::size_t>(std::llround(0.032 * sample_rate));
  if (len % 2) ++len;
  return SpectrogramPlan(std::max<std::size_t>(len, 2));
}

double SpectrogramPlan::window_norm() const {
  double s = 0.0;
  for (double w : window_) s += w * w;
  return std::sqrt(s);
}

double SpectrogramPlan::cola_error() const {
  double worst = 0.0;
  for (std::size_t n = 0; n < hop(); ++n)
    worst = std::max(worst, std::fabs(window_[n] * window_[n] +
                                      window_[n + hop()] * window_[n + hop()] - 1.0));
  return worst;
}

std::size_t SpectrogramPlan::frames_for(std::size_t n) const {
  return n == 0 ? 0 : (n - 1) / hop() + 2;
}

Spectrogram stft(std::span<const double> s, const SpectrogramPlan& plan) {
  if (s.empty()) throw std::invalid_argument("stft: empty signal");
  const std::size_t L = plan.frame_len(), H = plan.hop();
  const std::size_t F = plan.frames_for(s.size());
  Spectrogram S{plan, Grid<std::complex<double>>(plan.bins(), F), s.size()};
  RealFft fft(L);
  const auto& w = plan.window();
  const auto N = static_cast<std::ptrdiff_t>(s.size());
  for (std::size_t f = 0; f < F; ++f) {
    const auto start = static_cast<std::ptrdiff_t>(f * H) - static_cast<std::ptrdiff_t>(H);
    for (std::size_t n = 0; n < L; ++n) {
      const std::ptrdiff_t t = start + static_cast<std::ptrdiff_t>(n);
      fft.real()[n] = (t >= 0 && t < N) ? w[n] * s[static_cast<std::size_t>(t)] : 0.0;
    }
    fft.forward();
    for (std::size_t k = 0; k < plan.bins(); ++k) S.coeffs(k, f) = fft.spectrum()[k];
  }
  return S;
}

std::vector<double> istft(const Spectrogram& S) {
  const auto& plan = S.plan;
  const std::size_t L = plan.frame_len(), H = plan.hop();
  const std::size_t F = S.coeffs.cols();
  if (S.coeffs.rows() != plan.bins() || S.signal_length == 0 ||
      F != plan.frames_for(S.signal_length))
    throw std::invalid_argument("istft: spectrogram shape does not match its plan");
  RealFft fft(L);
  const auto& w = plan.window();
  const auto N = static_cast<std::ptrdiff_t>(S.signal_length);
  std::vector<double> out(S.signal_length, 0.0);
  const double scale = 1.0 / static_cast<double>(L);
  for (std::size_t f = 0; f < F; ++f) {
    for (std::size_t k = 0; k < plan.bins(); ++k) fft.spectrum()[k] = S.coeffs(k, f);
    // c2r assumes a Hermitian spectrum: DC and Nyquist are taken as real.
    fft.inverse();
    const auto start = static_cast<std::ptrdiff_t>(f * H) - static_cast<std::ptrdiff_t>(H);
    for (std::size_t n = 0; n < L; ++n) {
      const std::ptrdiff_t t = start + static_cast<std::ptrdiff_t>(n);
      if (t >= 0 && t < N) out[static_cast<std::size_t>(t)] += w[n] * fft.real()[n] * scale;
    }
  }
  return out;
}

SpeechResult denoise_speech(std::span<const double> s, const SpectrogramPlan& plan,
                            const OgsConfig& cfg, double sigma,
                            const SpeechOptions& options) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw std::invalid_argument("denoise_speech: sigma must be positive");
  SpeechResult res;
  res.coefficient_sigma = plan.coefficient_sigma(sigma);
  const OgsConfig run = cfg.scaled(res.coefficient_sigma);
  res.lambda_stft = run.lambda();
  Spectrogram S = stft(s, plan);
  auto den = ogs_denoise_2d(S.coeffs, run);
  res.iterations_run = den.iterations_run;
  if (options.ewp)
    S.coeffs.data() = empirical_wiener_post(
        std::span<const std::complex<double>>(S.coeffs.data()),
        std::span<const std::complex<double>>(den.estimate.data()),
        res.coefficient_sigma);
  else
    S.coeffs = std::move(den.estimate);
  res.signal = istft(S);
  return res;
}

double estimate_sigma_stft(std::span<const double> s, const SpectrogramPlan& plan) {
  const Spectrogram S = stft(s, plan);
  const std::size_t k0 = plan.bins() - plan.bins() / 4;
  std::vector<double> parts;
  // Skip the first and last frames, which see the zero padding, and the
  // purely real Nyquist bin.
  for (std::size_t k = k0; k + 1 < plan.bins(); ++k)
    for (std::size_t f = 1; f + 1 < S.coeffs.cols(); ++f) {
      parts.push_back(S.coeffs(k, f).real());
      parts.push_back(S.coeffs(k, f).imag());
    }
  if (parts.size() < 256)
    throw std::invalid_argument("estimate_sigma_stft: signal too short");
  // Each part has std sigma ||w|| / sqrt(2).
  return estimate_sigma_mad(parts) * std::sqrt(2.0) / plan.window_norm();
}

}  // namespace ogs
