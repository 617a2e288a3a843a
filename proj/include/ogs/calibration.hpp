#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ogs/config.hpp"

namespace ogs {

/// What is being calibrated: the OGS denoiser applied to pure Gaussian noise.
struct AlphaSetup {
  GroupShape shape;
  PenaltyKind kind = PenaltyKind::atan;
  /// a = beta / (K1 K2 lambda).
  double beta = 1.0;
  int iterations = 25;
  /// Circular complex noise with E|z|^2 = sigma^2 (spectrogram tables).
  bool complex_noise = false;
  /// lambda is given in units of sigma; alpha is sigma-relative.
  double sigma = 1.0;
};

/// Samples per noise realization. 1D realizations are one signal of this
/// length; 2D realizations are rows x 2048 arrays. Both get K-1 extra
/// samples of padding on every side which are excluded from the statistic.
inline constexpr std::size_t kRealizationSize = std::size_t{1} << 20;
inline constexpr std::size_t kRealizationCols = 2048;
inline constexpr std::size_t kMinAlphaSamples = 10000;
/// Default sample budget for table-grade entries: seven realizations.
inline constexpr std::size_t kTableSamples = 7 * kRealizationSize;

/// Raised when a Monte-Carlo estimate is requested with too few samples to
/// be meaningful.
class UnreliableEstimateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AlphaEstimate {
  /// Median over realizations of the sigma-relative output std.
  double alpha = 0.0;
  std::vector<double> per_realization;
  std::size_t effective_samples = 0;
};

/// Attenuation of Gaussian noise by OGS: std of the output over std of the
/// input, estimated from ceil(n_samples / kRealizationSize) independent
/// realizations. At small alpha the output is a handful of surviving noise
/// clusters, so a single realization's std is heavy tailed; the median over
/// realizations is the stable, typical value. Same seed, same result.
AlphaEstimate estimate_alpha_detailed(double lambda, const AlphaSetup& setup,
                                      std::size_t n_samples,
                                      std::uint64_t seed);
double estimate_alpha(double lambda, const AlphaSetup& setup,
                      std::size_t n_samples, std::uint64_t seed);

/// One (lambda, alpha) measurement. lambda is in units of sigma.
struct CalibrationEntry {
  PenaltyKind kind = PenaltyKind::atan;
  double beta = 1.0;
  int iterations = 25;
  GroupShape shape;
  double lambda = 0.0;
  double alpha = 0.0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
};

/// Entries sharing penalty kind, beta and iteration count. Validated on
/// construction: 0 < alpha <= 1, lambda > 0, and per group shape alpha is
/// strictly decreasing in lambda.
class CalibrationTable {
 public:
  explicit CalibrationTable(std::vector<CalibrationEntry> entries);

  const std::vector<CalibrationEntry>& entries() const { return entries_; }
  std::vector<GroupShape> shapes() const;
  /// Entries of one shape, sorted by lambda.
  std::vector<CalibrationEntry> for_shape(const GroupShape& shape) const;
  bool covers(const GroupShape& shape, double alpha) const;

  /// lambda for a target alpha by linear interpolation in (lambda, log alpha)
  /// between the neighbouring entries. Throws std::out_of_range when the
  /// shape is missing or alpha lies outside the tabulated range.
  double lambda_for_alpha(const GroupShape& shape, double alpha) const;

  /// CSV with header kind,beta,iterations,k1,k2,lambda,alpha,n_samples,seed.
  /// Lines starting with '#' are comments.
  void write_csv(std::ostream& os,
                 const std::vector<std::string>& comments = {}) const;
  static CalibrationTable read_csv(std::istream& is);

 private:
  std::vector<CalibrationEntry> entries_;
};

/// Reference table for the atan penalty with beta = 1 and 25 iterations,
/// real Gaussian noise: five (lambda, alpha) pairs from alpha = 1e-2 to 1e-4
/// for shapes 1x1 .. 1x5, 2x2 .. 5x5 and 2x8.
const CalibrationTable& builtin_atan_table();

struct SolveOptions {
  std::size_t n_samples = kTableSamples;
  std::uint64_t seed = 1;
  /// Stop when the bracket satisfies hi / lo - 1 <= rel_tolerance.
  double rel_tolerance = 2e-3;
  int max_evaluations = 40;
  /// Optional table used for the starting guess.
  const CalibrationTable* seed_table = nullptr;
};

struct LambdaSolve {
  double lambda = 0.0;
  double alpha = 0.0;
  /// Final bracket: alpha(lo) > target >= alpha(hi).
  double lo = 0.0;
  double hi = 0.0;
  int evaluations = 0;
  std::optional<double> table_guess;
};

/// lambda (in units of sigma) with estimate_alpha(lambda) = target. Every
/// evaluation uses the same noise (same seed), which makes alpha(lambda) a
/// deterministic decreasing function; the root is bracketed by geometric
/// steps from a starting guess and refined by Illinois regula falsi on
/// log alpha. Throws std::runtime_error when no bracket exists in
/// [1e-3, 1e3].
LambdaSolve solve_lambda_for_alpha(double target_alpha, const AlphaSetup& setup,
                                   const SolveOptions& options = {});

/// lambda_unit * sigma. Throws std::invalid_argument for sigma <= 0.
double scale_lambda_for_sigma(double lambda_unit, double sigma);

}  // namespace ogs
