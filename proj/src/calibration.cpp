#include "ogs/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "ogs/ogs.hpp"
#include "ogs/ogs2d.hpp"

namespace ogs {

namespace {

template <typename T>
T draw(std::mt19937_64& rng, std::normal_distribution<double>& g, double s) {
  if constexpr (std::is_same_v<T, double>)
    return s * g(rng);
  else
    return T(s * g(rng), s * g(rng));
}

// Population std over a rectangular interior of a row-major array.
template <typename T>
double interior_std(const std::vector<T>& x, std::size_t cols, std::size_t r0,
                    std::size_t r1, std::size_t c0, std::size_t c1) {
  T mean{};
  for (std::size_t i = r0; i < r1; ++i)
    for (std::size_t j = c0; j < c1; ++j) mean += x[i * cols + j];
  const double n = static_cast<double>((r1 - r0) * (c1 - c0));
  mean /= n;
  double s = 0.0;
  for (std::size_t i = r0; i < r1; ++i)
    for (std::size_t j = c0; j < c1; ++j) s += std::norm(x[i * cols + j] - mean);
  return std::sqrt(s / n);
}

template <typename T>
double one_realization(const OgsConfig& cfg, std::size_t m, double sigma,
                       std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  const double s = std::is_same_v<T, double> ? sigma : sigma / std::sqrt(2.0);
  const std::size_t p1 = cfg.shape().k1 - 1, p2 = cfg.shape().k2 - 1;
  if (cfg.shape().is_1d()) {
    std::vector<T> y(m + 2 * p2);
    for (T& v : y) v = draw<T>(rng, g, s);
    const auto x = ogs_denoise(y, cfg).estimate;
    return interior_std(x, y.size(), 0, 1, p2, p2 + m);
  }
  const std::size_t cols = std::min(m, kRealizationCols);
  const std::size_t rows = (m + cols - 1) / cols;
  Grid<T> y(rows + 2 * p1, cols + 2 * p2);
  for (T& v : y.data()) v = draw<T>(rng, g, s);
  const auto x = ogs_denoise_2d(y, cfg).estimate;
  return interior_std(x.data(), y.cols(), p1, p1 + rows, p2, p2 + cols);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

AlphaEstimate estimate_alpha_detailed(double lambda, const AlphaSetup& setup,
                                      std::size_t n_samples,
                                      std::uint64_t seed) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("estimate_alpha: lambda must be positive");
  if (!(setup.sigma > 0.0))
    throw std::invalid_argument("estimate_alpha: sigma must be positive");
  if (n_samples < kMinAlphaSamples)
    throw UnreliableEstimateError(
        "estimate_alpha: " + std::to_string(n_samples) +
        " samples is too few for a usable estimate (need at least " +
        std::to_string(kMinAlphaSamples) + ")");
  OgsOptions opt;
  opt.iterations = setup.iterations;
  opt.track_cost = false;
  const auto cfg = OgsConfig::from_fraction(lambda * setup.sigma, setup.shape,
                                            setup.kind, setup.beta, opt);

  const std::size_t m = std::min(n_samples, kRealizationSize);
  const std::size_t reps = (n_samples + m - 1) / m;
  std::mt19937_64 rng(seed);
  AlphaEstimate est;
  for (std::size_t r = 0; r < reps; ++r) {
    const double sd =
        setup.complex_noise
            ? one_realization<std::complex<double>>(cfg, m, setup.sigma, rng)
            : one_realization<double>(cfg, m, setup.sigma, rng);
    est.per_realization.push_back(sd / setup.sigma);
  }
  est.effective_samples = reps * m;
  est.alpha = median(est.per_realization);
  return est;
}

double estimate_alpha(double lambda, const AlphaSetup& setup,
                      std::size_t n_samples, std::uint64_t seed) {
  return estimate_alpha_detailed(lambda, setup, n_samples, seed).alpha;
}

CalibrationTable::CalibrationTable(std::vector<CalibrationEntry> entries)
    : entries_(std::move(entries)) {
  if (entries_.empty())
    throw std::invalid_argument("calibration table is empty");
  const auto& e0 = entries_.front();
  for (const auto& e : entries_) {
    if (e.kind != e0.kind || e.beta != e0.beta || e.iterations != e0.iterations)
      throw std::invalid_argument(
          "calibration entries must share penalty kind, beta and iterations");
    if (!(e.lambda > 0.0))
      throw std::invalid_argument("calibration entry with lambda <= 0");
    if (!(e.alpha > 0.0 && e.alpha <= 1.0))
      throw std::invalid_argument("calibration entry with alpha " +
                                  std::to_string(e.alpha) +
                                  " outside (0, 1] at lambda " +
                                  std::to_string(e.lambda));
  }
  std::stable_sort(entries_.begin(), entries_.end(),
                   [](const CalibrationEntry& a, const CalibrationEntry& b) {
                     if (a.shape.k1 != b.shape.k1) return a.shape.k1 < b.shape.k1;
                     if (a.shape.k2 != b.shape.k2) return a.shape.k2 < b.shape.k2;
                     return a.lambda < b.lambda;
                   });
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    const auto& p = entries_[i - 1];
    const auto& c = entries_[i];
    if (!(p.shape == c.shape)) continue;
    if (!(c.lambda > p.lambda) || !(c.alpha < p.alpha))
      throw std::invalid_argument(
          "calibration table for " + c.shape.to_string() +
          " is not strictly decreasing in lambda near lambda = " +
          std::to_string(c.lambda));
  }
}

std::vector<GroupShape> CalibrationTable::shapes() const {
  std::vector<GroupShape> out;
  for (const auto& e : entries_)
    if (out.empty() || !(out.back() == e.shape)) out.push_back(e.shape);
  return out;
}

std::vector<CalibrationEntry> CalibrationTable::for_shape(
    const GroupShape& shape) const {
  std::vector<CalibrationEntry> out;
  for (const auto& e : entries_)
    if (e.shape == shape) out.push_back(e);
  return out;
}

bool CalibrationTable::covers(const GroupShape& shape, double alpha) const {
  const auto rows = for_shape(shape);
  return !rows.empty() && alpha <= rows.front().alpha &&
         alpha >= rows.back().alpha;
}

double CalibrationTable::lambda_for_alpha(const GroupShape& shape,
                                          double alpha) const {
  const auto rows = for_shape(shape);
  if (rows.empty())
    throw std::out_of_range("no calibration entries for group shape " +
                            shape.to_string());
  if (!(alpha <= rows.front().alpha && alpha >= rows.back().alpha))
    throw std::out_of_range("alpha " + std::to_string(alpha) +
                            " outside the tabulated range for " +
                            shape.to_string());
  if (rows.size() == 1) return rows.front().lambda;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& a = rows[i - 1];
    const auto& b = rows[i];
    if (alpha >= b.alpha) {
      const double t = (std::log(alpha) - std::log(a.alpha)) /
                       (std::log(b.alpha) - std::log(a.alpha));
      return a.lambda + t * (b.lambda - a.lambda);
    }
  }
  return rows.back().lambda;
}

void CalibrationTable::write_csv(std::ostream& os,
                                 const std::vector<std::string>& comments) const {
  for (const auto& c : comments) os << "# " << c << '\n';
  os << "kind,beta,iterations,k1,k2,lambda,alpha,n_samples,seed\n";
  const auto old = os.precision(std::numeric_limits<double>::max_digits10);
  for (const auto& e : entries_)
    os << to_string(e.kind) << ',' << e.beta << ',' << e.iterations << ','
       << e.shape.k1 << ',' << e.shape.k2 << ',' << e.lambda << ',' << e.alpha
       << ',' << e.n_samples << ',' << e.seed << '\n';
  os.precision(old);
}

CalibrationTable CalibrationTable::read_csv(std::istream& is) {
  std::vector<CalibrationEntry> out;
  std::string line;
  bool header = false;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "kind,beta,iterations,k1,k2,lambda,alpha,n_samples,seed")
        throw std::invalid_argument("calibration CSV: unexpected header '" +
                                    line + "'");
      header = true;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 9)
      throw std::invalid_argument("calibration CSV line " +
                                  std::to_string(line_no) + ": expected 9 fields");
    try {
      CalibrationEntry e;
      e.kind = parse_penalty_kind(f[0]);
      e.beta = std::stod(f[1]);
      e.iterations = std::stoi(f[2]);
      e.shape = {std::stoul(f[3]), std::stoul(f[4])};
      e.lambda = std::stod(f[5]);
      e.alpha = std::stod(f[6]);
      e.n_samples = std::stoull(f[7]);
      e.seed = std::stoull(f[8]);
      out.push_back(e);
    } catch (const std::logic_error& err) {
      throw std::invalid_argument("calibration CSV line " +
                                  std::to_string(line_no) + ": " + err.what());
    }
  }
  if (!header) throw std::invalid_argument("calibration CSV: missing header");
  return CalibrationTable(std::move(out));
}

const CalibrationTable& builtin_atan_table() {
  static const CalibrationTable table = [] {
    struct Row {
      std::size_t k1, k2;
      double v[5][2];
    };
    static const Row rows[] = {
        {1, 1, {{4.25, 1.00e-2}, {4.59, 4.33e-3}, {4.93, 1.51e-3}, {5.27, 4.05e-4}, {5.61, 1.00e-4}}},
        {1, 2, {{2.14, 1.00e-2}, {2.31, 4.35e-3}, {2.48, 1.49e-3}, {2.64, 3.99e-4}, {2.81, 1.00e-4}}},
        {1, 3, {{1.45, 1.00e-2}, {1.56, 4.52e-3}, {1.68, 1.56e-3}, {1.79, 4.06e-4}, {1.91, 1.00e-4}}},
        {1, 4, {{1.11, 1.00e-2}, {1.20, 4.47e-3}, {1.29, 1.58e-3}, {1.38, 4.11e-4}, {1.47, 1.00e-4}}},
        {1, 5, {{0.91, 1.00e-2}, {0.98, 4.37e-3}, {1.05, 1.55e-3}, {1.13, 4.07e-4}, {1.20, 1.00e-4}}},
        {2, 2, {{1.08, 1.00e-2}, {1.16, 4.37e-3}, {1.24, 1.47e-3}, {1.33, 3.95e-4}, {1.41, 1.00e-4}}},
        {2, 3, {{0.73, 1.00e-2}, {0.79, 4.41e-3}, {0.85, 1.49e-3}, {0.90, 3.96e-4}, {0.96, 1.00e-4}}},
        {2, 4, {{0.56, 1.00e-2}, {0.61, 4.18e-3}, {0.65, 1.44e-3}, {0.70, 3.91e-4}, {0.74, 1.00e-4}}},
        {2, 5, {{0.47, 1.00e-2}, {0.50, 3.89e-3}, {0.54, 1.33e-3}, {0.58, 3.74e-4}, {0.61, 1.00e-4}}},
        {3, 3, {{0.50, 1.00e-2}, {0.54, 4.11e-3}, {0.58, 1.38e-3}, {0.62, 3.81e-4}, {0.66, 1.00e-4}}},
        {3, 4, {{0.40, 1.00e-2}, {0.43, 3.57e-3}, {0.46, 1.19e-3}, {0.49, 3.51e-4}, {0.51, 1.00e-4}}},
        {3, 5, {{0.34, 1.00e-2}, {0.36, 3.26e-3}, {0.39, 1.04e-3}, {0.41, 3.23e-4}, {0.43, 1.00e-4}}},
        {4, 4, {{0.33, 1.00e-2}, {0.35, 3.24e-3}, {0.37, 1.02e-3}, {0.39, 3.16e-4}, {0.41, 1.00e-4}}},
        {4, 5, {{0.29, 1.00e-2}, {0.30, 3.09e-3}, {0.32, 9.61e-4}, {0.33, 3.04e-4}, {0.35, 1.00e-4}}},
        {5, 5, {{0.25, 1.00e-2}, {0.26, 3.05e-3}, {0.28, 9.44e-4}, {0.29, 3.01e-4}, {0.30, 1.00e-4}}},
        {2, 8, {{0.33, 1.00e-2}, {0.35, 3.33e-3}, {0.37, 1.05e-3}, {0.39, 3.22e-4}, {0.41, 1.00e-4}}},
    };
    std::vector<CalibrationEntry> entries;
    for (const auto& r : rows)
      for (const auto& p : r.v) {
        CalibrationEntry e;
        e.shape = {r.k1, r.k2};
        e.lambda = p[0];
        e.alpha = p[1];
        entries.push_back(e);
      }
    return CalibrationTable(std::move(entries));
  }();
  return table;
}

LambdaSolve solve_lambda_for_alpha(double target_alpha, const AlphaSetup& setup,
                                   const SolveOptions& options) {
  if (!(target_alpha > 0.0 && target_alpha < 1.0))
    throw std::invalid_argument("target alpha must lie in (0, 1)");
  if (!(options.rel_tolerance > 0.0))
    throw std::invalid_argument("rel_tolerance must be positive");
  LambdaSolve out;
  auto alpha_at = [&](double lam) {
    if (out.evaluations >= options.max_evaluations)
      throw std::runtime_error("solve_lambda_for_alpha: evaluation budget of " +
                               std::to_string(options.max_evaluations) +
                               " exhausted");
    ++out.evaluations;
    return estimate_alpha(lam, setup, options.n_samples, options.seed);
  };
  // f < 0 once lambda is large enough; alpha = 0 maps to -inf.
  const double log_target = std::log(target_alpha);
  auto f_of = [&](double a) {
    return a > 0.0 ? std::log(a) - log_target
                   : -std::numeric_limits<double>::infinity();
  };

  const double card = static_cast<double>(setup.shape.cardinality());
  double guess = 4.0 / std::pow(card, 0.75);
  if (options.seed_table && setup.complex_noise == false &&
      options.seed_table->covers(setup.shape, target_alpha)) {
    guess = options.seed_table->lambda_for_alpha(setup.shape, target_alpha);
    out.table_guess = guess;
  }

  constexpr double kStep = 1.25, kMin = 1e-3, kMax = 1e3;
  double lo = guess, hi = guess;
  double alo = alpha_at(guess), ahi = alo;
  double flo = f_of(alo), fhi = flo;
  if (flo > 0.0) {
    while (fhi > 0.0) {
      lo = hi, alo = ahi, flo = fhi;
      hi *= kStep;
      if (hi > kMax)
        throw std::runtime_error("solve_lambda_for_alpha: no lambda below " +
                                 std::to_string(kMax) + " reaches alpha " +
                                 std::to_string(target_alpha));
      ahi = alpha_at(hi);
      fhi = f_of(ahi);
    }
  } else {
    while (flo <= 0.0) {
      hi = lo, ahi = alo, fhi = flo;
      lo /= kStep;
      if (lo < kMin)
        throw std::runtime_error("solve_lambda_for_alpha: alpha " +
                                 std::to_string(target_alpha) +
                                 " is not bracketed above lambda = " +
                                 std::to_string(kMin));
      alo = alpha_at(lo);
      flo = f_of(alo);
    }
  }

  // Illinois regula falsi in (lambda, log alpha), bisection when an end has
  // alpha = 0 or the secant lands outside the bracket.
  int side = 0;
  while (hi / lo - 1.0 > options.rel_tolerance) {
    double mid = 0.5 * (lo + hi);
    if (std::isfinite(fhi)) {
      const double s = lo - flo * (hi - lo) / (fhi - flo);
      if (s > lo && s < hi) mid = s;
    }
    const double am = alpha_at(mid);
    const double fm = f_of(am);
    if (fm > 0.0) {
      lo = mid, alo = am, flo = fm;
      if (side == -1 && std::isfinite(fhi)) fhi *= 0.5;
      side = -1;
    } else {
      hi = mid, ahi = am, fhi = fm;
      if (side == 1) flo *= 0.5;
      side = 1;
    }
  }
  out.lo = lo;
  out.hi = hi;
  // Report the end whose alpha is closer to the target on the log scale.
  const bool pick_lo = std::fabs(f_of(alo)) <= std::fabs(f_of(ahi));
  out.lambda = pick_lo ? lo : hi;
  out.alpha = pick_lo ? alo : ahi;
  return out;
}

double scale_lambda_for_sigma(double lambda_unit, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  return lambda_unit * sigma;
}

}  // namespace ogs
