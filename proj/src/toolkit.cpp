#include "ogs/toolkit.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "ogs/calibration.hpp"
#include "ogs/ogs.hpp"

namespace ogs {

GroupSparseSignal gen_group_sparse(const GroupSparseSpec& spec, std::uint64_t seed) {
  if (spec.len_min == 0 || spec.len_min > spec.len_max)
    throw std::invalid_argument("gen_group_sparse: need 0 < len_min <= len_max");
  if (!(spec.amp_min > 0.0) || spec.amp_max < spec.amp_min)
    throw std::invalid_argument("gen_group_sparse: need 0 < amp_min <= amp_max");
  GroupSparseSignal out{std::vector<double>(spec.n, 0.0), {}};
  if (spec.n_groups == 0) return out;
  if (spec.n_groups * (spec.len_min + 1) > spec.n + 1)
    throw std::invalid_argument("gen_group_sparse: groups cannot fit in the signal");

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> ulen(spec.len_min, spec.len_max);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const std::size_t g = spec.n_groups;
  // Draw lengths until they fit with one zero between bursts, then spread
  // the slack over the g + 1 gaps (sorted uniform cut points).
  std::vector<std::size_t> lens(g);
  std::size_t used = 0;
  bool fits = false;
  for (int attempt = 0; attempt < 1000 && !fits; ++attempt) {
    used = g - 1;
    for (auto& l : lens) used += l = ulen(rng);
    fits = used <= spec.n;
  }
  if (!fits)
    throw std::invalid_argument("gen_group_sparse: could not place " + std::to_string(g) +
                                " groups in " + std::to_string(spec.n) + " samples");
  const std::size_t slack = spec.n - used;
  std::uniform_int_distribution<std::size_t> ucut(0, slack);
  std::vector<std::size_t> cuts(g);
  for (auto& c : cuts) c = ucut(rng);
  std::sort(cuts.begin(), cuts.end());

  std::size_t pos = 0, prev_cut = 0;
  for (std::size_t i = 0; i < g; ++i) {
    pos += cuts[i] - prev_cut + (i > 0 ? 1 : 0);
    prev_cut = cuts[i];
    const double sign = u01(rng) < 0.5 ? -1.0 : 1.0;
    const double freq = 0.02 + 0.08 * u01(rng);
    const double phase = 2.0 * std::numbers::pi * u01(rng);
    for (std::size_t t = 0; t < lens[i]; ++t) {
      const double m =
          0.5 + 0.5 * std::sin(2.0 * std::numbers::pi * freq * static_cast<double>(t) + phase);
      out.samples[pos + t] = sign * (spec.amp_min + (spec.amp_max - spec.amp_min) * m);
    }
    out.bursts.push_back({pos, lens[i]});
    pos += lens[i];
  }
  std::sort(out.bursts.begin(), out.bursts.end(),
            [](const Burst& a, const Burst& b) { return a.start < b.start; });
  return out;
}

NoisySignal add_awgn(std::span<const double> x, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma))
    throw std::invalid_argument("add_awgn: sigma must be >= 0");
  NoisySignal out{std::vector<double>(x.begin(), x.end()), sigma};
  if (sigma == 0.0) return out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, sigma);
  for (double& v : out.samples) v += g(rng);
  return out;
}

NoisySignal add_awgn_snr(std::span<const double> x, double snr_db, std::uint64_t seed) {
  double e = 0.0;
  for (double v : x) e += v * v;
  if (e == 0.0 || x.empty())
    throw std::invalid_argument("add_awgn_snr: target SNR needs a nonzero signal");
  const double sigma =
      std::sqrt(e) / std::sqrt(static_cast<double>(x.size()) * std::pow(10.0, snr_db / 10.0));
  return add_awgn(x, sigma, seed);
}

double snr_db(std::span<const double> reference, std::span<const double> estimate) {
  if (reference.size() != estimate.size())
    throw std::invalid_argument("snr_db: length mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    num += reference[i] * reference[i];
    den += (reference[i] - estimate[i]) * (reference[i] - estimate[i]);
  }
  if (num == 0.0) throw std::invalid_argument("snr_db: zero reference signal");
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(num / den);
}

double estimate_sigma_mad(std::span<const double> y) {
  if (y.size() < 256)
    throw std::invalid_argument("estimate_sigma_mad: need at least 256 samples, got " +
                                std::to_string(y.size()));
  std::vector<double> v(y.begin(), y.end());
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  const double med = *mid;
  for (double& x : v) x = std::fabs(x - med);
  std::nth_element(v.begin(), mid, v.end());
  return *mid / 0.6745;
}

std::vector<double> scalar_threshold_denoise(std::span<const double> y, double threshold,
                                             ThresholdMode mode) {
  if (!(threshold >= 0.0)) throw std::invalid_argument("threshold must be >= 0");
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double a = std::fabs(y[i]);
    if (mode == ThresholdMode::hard)
      out[i] = a > threshold ? y[i] : 0.0;
    else
      out[i] = a > threshold ? std::copysign(a - threshold, y[i]) : 0.0;
  }
  return out;
}

double threshold_for_alpha(double alpha, ThresholdMode mode) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("threshold_for_alpha: alpha must lie in (0, 1)");
  auto out_std = [mode](double T) {
    const double Q = 0.5 * std::erfc(T / std::numbers::sqrt2);
    const double phi = std::exp(-0.5 * T * T) / std::sqrt(2.0 * std::numbers::pi);
    const double m2 = mode == ThresholdMode::hard ? 2.0 * (T * phi + Q)
                                                  : 2.0 * ((1.0 + T * T) * Q - T * phi);
    return std::sqrt(std::max(m2, 0.0));
  };
  double lo = 0.0, hi = 40.0;
  for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
    const double mid = 0.5 * (lo + hi);
    (out_std(mid) > alpha ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

template <typename T>
std::vector<T> wiener(std::span<const T> noisy, std::span<const T> pilot, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("empirical_wiener_post: sigma must be > 0");
  if (noisy.size() != pilot.size())
    throw std::invalid_argument("empirical_wiener_post: length mismatch");
  const double s2 = sigma * sigma;
  std::vector<T> out(noisy.size());
  for (std::size_t i = 0; i < noisy.size(); ++i) {
    const double p2 = std::norm(pilot[i]);
    out[i] = p2 == 0.0 ? T{} : noisy[i] * (p2 / (p2 + s2));
  }
  return out;
}

}  // namespace

std::vector<double> empirical_wiener_post(std::span<const double> noisy,
                                          std::span<const double> pilot, double sigma) {
  return wiener(noisy, pilot, sigma);
}

std::vector<std::complex<double>> empirical_wiener_post(
    std::span<const std::complex<double>> noisy,
    std::span<const std::complex<double>> pilot, double sigma) {
  return wiener(noisy, pilot, sigma);
}

// ---- WAV ----

namespace {

std::uint32_t le32(const unsigned char* p) {
  return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 |
         std::uint32_t(p[3]) << 24;
}
std::uint16_t le16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | p[1] << 8);
}
void put32(std::ostream& os, std::uint32_t v) {
  const char b[4] = {char(v & 0xff), char(v >> 8 & 0xff), char(v >> 16 & 0xff),
                     char(v >> 24 & 0xff)};
  os.write(b, 4);
}
void put16(std::ostream& os, std::uint16_t v) {
  const char b[2] = {char(v & 0xff), char(v >> 8 & 0xff)};
  os.write(b, 2);
}

}  // namespace

Audio read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_wav: cannot open " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw std::runtime_error("read_wav: " + path + " is not a RIFF/WAVE file");

  int channels = 0, bits = 0, format = 0;
  std::uint32_t rate = 0;
  const unsigned char* data = nullptr;
  std::size_t data_len = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* h = bytes.data() + pos;
    const std::uint32_t len = le32(h + 4);
    const std::size_t body = pos + 8;
    if (body + len > bytes.size() && std::memcmp(h, "data", 4) != 0)
      throw std::runtime_error("read_wav: truncated chunk in " + path);
    if (std::memcmp(h, "fmt ", 4) == 0) {
      if (len < 16) throw std::runtime_error("read_wav: short fmt chunk in " + path);
      format = le16(h + 8);
      channels = le16(h + 10);
      rate = le32(h + 12);
      bits = le16(h + 22);
      if (format == 0xFFFE && len >= 40) format = le16(h + 8 + 24);
    } else if (std::memcmp(h, "data", 4) == 0) {
      data = h + 8;
      data_len = std::min<std::size_t>(len, bytes.size() - body);
      break;
    }
    pos = body + len + (len & 1);
  }
  if (format == 0) throw std::runtime_error("read_wav: missing fmt chunk in " + path);
  if (format != 1 || bits != 16)
    throw std::runtime_error("read_wav: only 16-bit PCM is supported (" + path + ")");
  if (channels < 1 || rate == 0)
    throw std::runtime_error("read_wav: bad channel count or rate in " + path);
  if (!data) throw std::runtime_error("read_wav: missing data chunk in " + path);

  Audio a;
  a.sample_rate = static_cast<int>(rate);
  a.downmixed = channels > 1;
  const std::size_t frames = data_len / (2 * static_cast<std::size_t>(channels));
  a.samples.resize(frames);
  for (std::size_t f = 0; f < frames; ++f) {
    double acc = 0.0;
    for (int c = 0; c < channels; ++c) {
      const auto v = static_cast<std::int16_t>(
          le16(data + 2 * (f * static_cast<std::size_t>(channels) + c)));
      acc += v / 32768.0;
    }
    a.samples[f] = acc / channels;
  }
  return a;
}

void write_wav(const std::string& path, std::span<const double> samples, int sample_rate) {
  if (sample_rate <= 0) throw std::invalid_argument("write_wav: bad sample rate");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_wav: cannot open " + path);
  const auto data_len = static_cast<std::uint32_t>(samples.size() * 2);
  out.write("RIFF", 4);
  put32(out, 36 + data_len);
  out.write("WAVEfmt ", 8);
  put32(out, 16);
  put16(out, 1);
  put16(out, 1);
  put32(out, static_cast<std::uint32_t>(sample_rate));
  put32(out, static_cast<std::uint32_t>(sample_rate) * 2);
  put16(out, 2);
  put16(out, 16);
  out.write("data", 4);
  put32(out, data_len);
  for (double v : samples) {
    const double c = std::clamp(v * 32768.0, -32768.0, 32767.0);
    put16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(std::trunc(c))));
  }
  if (!out) throw std::runtime_error("write_wav: write failed for " + path);
}

// ---- benchmark ----

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi >= lo) || n == 0)
    throw std::invalid_argument("log_grid: need 0 < lo <= hi and n >= 1");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = n == 1 ? lo
                  : lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n - 1));
  return g;
}

namespace {

struct OgsMethod {
  const char* name;
  PenaltyKind kind;
};
constexpr OgsMethod kOgsMethods[] = {{"ogs_abs", PenaltyKind::abs},
                                     {"ogs_log", PenaltyKind::log},
                                     {"ogs_atan", PenaltyKind::atan}};

void check_sign_and_magnitude(std::span<const double> y, std::span<const double> x,
                              const char* method) {
  for (std::size_t i = 0; i < y.size(); ++i) {
    const bool ok = (y[i] != 0.0 || x[i] == 0.0) && x[i] * y[i] >= 0.0 &&
                    std::fabs(x[i]) <= std::fabs(y[i]);
    if (!ok)
      throw InvariantError(std::string(method) + ": output sample " + std::to_string(i) +
                           " violates zero/sign/magnitude preservation");
  }
}

}  // namespace

BenchmarkResult benchmark_example1(const std::vector<std::uint64_t>& seeds,
                                   const BenchmarkSpec& spec) {
  if (seeds.empty()) throw std::invalid_argument("benchmark_example1: no seeds");
  const GroupShape shape{1, spec.group_len};
  OgsOptions opt;
  opt.iterations = spec.iterations;
  opt.track_cost = false;

  BenchmarkResult res;
  if (spec.alpha) {
    res.unit_parameter["hard"] = threshold_for_alpha(*spec.alpha, ThresholdMode::hard);
    res.unit_parameter["soft"] = threshold_for_alpha(*spec.alpha, ThresholdMode::soft);
    for (const auto& m : kOgsMethods) {
      AlphaSetup setup;
      setup.shape = shape;
      setup.kind = m.kind;
      setup.iterations = spec.iterations;
      SolveOptions so;
      so.n_samples = spec.calibration_samples;
      so.seed = spec.calibration_seed;
      if (m.kind == PenaltyKind::atan && spec.iterations == 25)
        so.seed_table = &builtin_atan_table();
      res.unit_parameter[m.name] = solve_lambda_for_alpha(*spec.alpha, setup, so).lambda;
    }
  }
  const auto grid = log_grid(spec.grid_lo, spec.grid_hi, spec.grid_points);

  for (std::uint64_t seed : seeds) {
    const auto clean = gen_group_sparse(spec.signal, seed);
    const auto noisy = add_awgn_snr(clean.samples, spec.snr_db, seed ^ 0x9E3779B97F4A7C15ull);
    const std::span<const double> x(clean.samples), y(noisy.samples);
    SnrReport rep;
    rep.seed = seed;
    rep.sigma = noisy.sigma;
    rep.input_snr_db = snr_db(x, y);

    auto pick = [&](const std::string& name, auto&& run) {
      if (spec.alpha) {
        const double p = res.unit_parameter.at(name) * noisy.sigma;
        rep.parameter[name] = p;
        rep.output_snr_db[name] = snr_db(x, run(p));
        return;
      }
      double best = -std::numeric_limits<double>::infinity(), best_p = 0.0;
      for (double g : grid) {
        const double p = g * noisy.sigma;
        const double s = snr_db(x, run(p));
        if (s > best) best = s, best_p = p;
      }
      rep.parameter[name] = best_p;
      rep.output_snr_db[name] = best;
    };
    pick("hard", [&](double T) { return scalar_threshold_denoise(y, T, ThresholdMode::hard); });
    pick("soft", [&](double T) { return scalar_threshold_denoise(y, T, ThresholdMode::soft); });
    for (const auto& m : kOgsMethods)
      pick(m.name, [&](double lam) {
        const auto cfg = OgsConfig::from_fraction(lam, shape, m.kind, 1.0, opt);
        auto est = ogs_denoise(y, cfg).estimate;
        check_sign_and_magnitude(y, est, m.name);
        return est;
      });
    res.runs.push_back(std::move(rep));
  }
  for (const auto& r : res.runs)
    for (const auto& [name, v] : r.output_snr_db) res.mean_snr_db[name] += v;
  for (auto& [name, v] : res.mean_snr_db) v /= static_cast<double>(res.runs.size());
  return res;
}

}  // namespace ogs
