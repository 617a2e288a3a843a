// ogstk: command-line front end for overlapping group shrinkage.
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ogs/calibration.hpp"
#include "ogs/ogs.hpp"
#include "ogs/shrinkage.hpp"
#include "ogs/spectral.hpp"
#include "ogs/sure.hpp"
#include "ogs/toolkit.hpp"

using json = nlohmann::json;
using namespace ogs;

namespace {

constexpr const char* kGenerator = "ogstk 1.0 (mt19937_64, std::normal_distribution)";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void warn(const std::string& msg) { std::cerr << "ogstk: warning: " << msg << '\n'; }

// ---- CSV helpers ----

// First column of every data line. '#' lines are comments; a single
// non-numeric line before the data is taken as a header.
std::vector<double> read_column_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<double> out;
  std::string line;
  int line_no = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::string cell = line.substr(0, line.find(','));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(cell, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || cell.find_first_not_of(" \t", used) != std::string::npos) {
      if (!seen_header && out.empty()) {
        seen_header = true;
        continue;
      }
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": not a number: '" +
                               cell + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw std::runtime_error(path + ": no samples");
  return out;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.precision(std::numeric_limits<double>::max_digits10);
  return out;
}

void write_provenance(std::ostream& os, std::uint64_t seed, const json& config) {
  os << "# generator: " << kGenerator << '\n';
  os << "# seed: " << seed << '\n';
  os << "# config: " << config.dump() << '\n';
}

void write_column_csv(const std::string& path, const std::string& name,
                      const std::vector<double>& v, std::uint64_t seed, const json& config) {
  auto out = open_out(path);
  write_provenance(out, seed, config);
  out << name << '\n';
  for (double x : v) out << x << '\n';
  if (!out) throw std::runtime_error("write failed for " + path);
}

bool is_wav(const std::string& path) {
  if (path.size() < 4) return false;
  std::string ext = path.substr(path.size() - 4);
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".wav";
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    std::size_t used = 0;
    out.push_back(std::stod(cell, &used));
    if (used != cell.size()) throw UsageError("bad number in list: '" + cell + "'");
  }
  if (out.empty()) throw UsageError("empty list");
  return out;
}

std::pair<std::string, double> split_mode(const std::string& mode) {
  if (mode == "max-snr") return {mode, 0.0};
  if (mode.rfind("alpha:", 0) == 0) {
    const double a = std::stod(mode.substr(6));
    if (!(a > 0.0 && a < 1.0)) throw UsageError("--mode alpha:<f> needs 0 < f < 1");
    return {"alpha", a};
  }
  throw UsageError("--mode must be max-snr or alpha:<f>");
}

GroupShape default_speech_shape(int sample_rate) {
  return sample_rate <= 8000 ? GroupShape{7, 2} : GroupShape{8, 2};
}

// ---- lambda selection shared by the subcommands ----

struct UnitLambda {
  double lambda = 0.0;
  std::string method;
  int evaluations = 0;
};

UnitLambda unit_lambda_for_alpha(double alpha, const AlphaSetup& setup, std::size_t samples,
                                 std::uint64_t seed) {
  const auto& table = builtin_atan_table();
  const bool table_ok = setup.kind == PenaltyKind::atan && setup.beta == 1.0 &&
                        setup.iterations == 25 && !setup.complex_noise;
  if (table_ok && table.covers(setup.shape, alpha))
    return {table.lambda_for_alpha(setup.shape, alpha), "builtin-table", 0};
  SolveOptions so;
  so.n_samples = samples;
  so.seed = seed;
  if (table_ok) so.seed_table = &table;
  const auto solve = solve_lambda_for_alpha(alpha, setup, so);
  return {solve.lambda, "monte-carlo", solve.evaluations};
}

// ---- subcommands ----

struct Denoise1d {
  std::string in, out, penalty = "atan";
  std::optional<double> lambda, alpha, sigma;
  std::size_t k = 5;
  double beta = 1.0;
  int iters = 25;
  std::uint64_t seed = 1;
  std::size_t calib_samples = 3 * kRealizationSize;
};

void run_denoise_1d(const Denoise1d& o) {
  const auto y = read_column_csv(o.in);
  const auto kind = parse_penalty_kind(o.penalty);
  json cfg = {{"command", "denoise-1d"}, {"in", o.in},       {"penalty", o.penalty},
              {"k", o.k},                {"beta", o.beta},   {"iters", o.iters},
              {"seed", o.seed}};
  double lambda = 0.0;
  if (o.lambda) {
    lambda = *o.lambda;
  } else {
    double sigma = 0.0;
    if (o.sigma) {
      sigma = *o.sigma;
      cfg["sigma_source"] = "flag";
    } else {
      sigma = estimate_sigma_mad(y);
      cfg["sigma_source"] = "mad";
      if (sigma == 0.0) throw std::runtime_error("MAD noise estimate is 0 (constant input); pass --sigma");
    }
    AlphaSetup setup;
    setup.shape = {1, o.k};
    setup.kind = kind;
    setup.beta = o.beta;
    setup.iterations = o.iters;
    const auto unit = unit_lambda_for_alpha(*o.alpha, setup, o.calib_samples, o.seed);
    lambda = scale_lambda_for_sigma(unit.lambda, sigma);
    cfg["alpha"] = *o.alpha;
    cfg["sigma"] = sigma;
    cfg["lambda_unit"] = unit.lambda;
    cfg["lambda_method"] = unit.method;
  }
  OgsOptions opt;
  opt.iterations = o.iters;
  opt.track_cost = false;
  const auto run = OgsConfig::from_fraction(lambda, {1, o.k}, kind, o.beta, opt);
  cfg["lambda"] = lambda;
  cfg["a"] = run.penalty().a();
  const auto res = ogs_denoise(y, run);
  write_column_csv(o.out, "x", res.estimate, o.seed, cfg);
}

struct DenoiseWav {
  std::string in, out, penalty = "atan";
  std::optional<std::size_t> k1, k2;
  double alpha = 3e-4;
  std::optional<double> sigma;
  bool ewp = false;
  std::uint64_t seed = 1;
  std::size_t calib_samples = kRealizationSize;
};

void run_denoise_wav(const DenoiseWav& o) {
  const auto audio = read_wav(o.in);
  if (audio.downmixed) warn(o.in + " has several channels; averaged to mono");
  const auto plan = SpectrogramPlan::for_sample_rate(audio.sample_rate);
  const auto def = default_speech_shape(audio.sample_rate);
  const GroupShape shape{o.k1.value_or(def.k1), o.k2.value_or(def.k2)};
  const auto kind = parse_penalty_kind(o.penalty);
  double sigma = 0.0;
  if (o.sigma) {
    sigma = *o.sigma;
  } else {
    sigma = estimate_sigma_stft(audio.samples, plan);
    if (sigma == 0.0) throw std::runtime_error("noise estimate is 0 (silent input); pass --sigma");
    warn("no --sigma; estimated " + std::to_string(sigma) + " from the upper STFT band");
  }
  AlphaSetup setup;
  setup.shape = shape;
  setup.kind = kind;
  setup.complex_noise = true;
  const auto unit = unit_lambda_for_alpha(o.alpha, setup, o.calib_samples, o.seed);
  const auto cfg_unit = OgsConfig::from_fraction(unit.lambda, shape, kind, 1.0);
  SpeechOptions so;
  so.ewp = o.ewp;
  const auto res = denoise_speech(audio.samples, plan, cfg_unit, sigma, so);
  write_wav(o.out, res.signal, audio.sample_rate);
  const json report = {{"command", "denoise-wav"},
                       {"generator", kGenerator},
                       {"seed", o.seed},
                       {"in", o.in},
                       {"out", o.out},
                       {"sample_rate", audio.sample_rate},
                       {"frame_len", plan.frame_len()},
                       {"k1", shape.k1},
                       {"k2", shape.k2},
                       {"penalty", o.penalty},
                       {"alpha", o.alpha},
                       {"sigma", sigma},
                       {"sigma_source", o.sigma ? "flag" : "stft-mad"},
                       {"lambda_unit", unit.lambda},
                       {"lambda_stft", res.lambda_stft},
                       {"coefficient_sigma", res.coefficient_sigma},
                       {"ewp", o.ewp}};
  std::cout << report.dump(2) << '\n';
}

struct Calibrate {
  std::string penalty = "atan", k, lambdas, out;
  double beta = 1.0;
  int iters = 25;
  std::optional<double> target_alpha;
  std::uint64_t seed = 1;
  std::size_t samples = kTableSamples;
  bool complex_noise = false;
};

void run_calibrate(const Calibrate& o) {
  AlphaSetup setup;
  setup.shape = GroupShape::parse(o.k);
  setup.kind = parse_penalty_kind(o.penalty);
  setup.beta = o.beta;
  setup.iterations = o.iters;
  setup.complex_noise = o.complex_noise;

  std::vector<CalibrationEntry> entries;
  auto entry = [&](double lambda, double alpha) {
    return CalibrationEntry{setup.kind, setup.beta, setup.iterations, setup.shape,
                            lambda,     alpha,      o.samples,        o.seed};
  };
  if (o.target_alpha) {
    SolveOptions so;
    so.n_samples = o.samples;
    so.seed = o.seed;
    if (setup.kind == PenaltyKind::atan && !setup.complex_noise) so.seed_table = &builtin_atan_table();
    const auto solve = solve_lambda_for_alpha(*o.target_alpha, setup, so);
    entries.push_back(entry(solve.lambda, solve.alpha));
  } else {
    auto grid = parse_list(o.lambdas);
    std::sort(grid.begin(), grid.end());
    for (double lam : grid) entries.push_back(entry(lam, estimate_alpha(lam, setup, o.samples, o.seed)));
  }
  std::optional<CalibrationTable> table;
  try {
    table.emplace(entries);
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("measured table is not usable (") + e.what() +
                             "); use a narrower lambda range or more --samples");
  }
  auto out = open_out(o.out);
  const json cfg = {{"command", "calibrate"}, {"penalty", o.penalty}, {"beta", o.beta},
                    {"k", setup.shape.to_string()}, {"iters", o.iters},
                    {"noise", o.complex_noise ? "complex" : "real"}, {"samples", o.samples}};
  table->write_csv(out, {std::string("generator: ") + kGenerator,
                         "seed: " + std::to_string(o.seed), "config: " + cfg.dump()});
}

struct SureScanCmd {
  std::string in, out, penalty = "atan";
  double sigma = 0.0, lambda_min = 0.0, lambda_max = 0.0, beta = 1.0;
  std::size_t points = 10;
  std::optional<std::size_t> k, k1, k2;
  int iters = 25;
  int probes = 1;
  std::uint64_t seed = 1;
};

void run_sure_scan(const SureScanCmd& o) {
  if (!(o.sigma > 0.0)) throw UsageError("--sigma must be positive");
  const auto grid = log_grid(o.lambda_min, o.lambda_max, o.points);
  const auto kind = parse_penalty_kind(o.penalty);
  OgsOptions opt;
  opt.iterations = o.iters;
  opt.track_cost = false;
  SureOptions so;
  so.probes = o.probes;
  so.seed = o.seed;
  json cfg = {{"command", "sure-scan"}, {"in", o.in},         {"sigma", o.sigma},
              {"penalty", o.penalty},   {"beta", o.beta},     {"iters", o.iters},
              {"probes", o.probes},     {"lambda_units", "sigma"}};

  // Grid values are in units of sigma. WAV input is scored in the time
  // domain, where the noise really is white, through the whole STFT pipeline.
  std::vector<SureEstimate> est;
  if (is_wav(o.in)) {
    const auto audio = read_wav(o.in);
    if (audio.downmixed) warn(o.in + " has several channels; averaged to mono");
    const auto plan = SpectrogramPlan::for_sample_rate(audio.sample_rate);
    const auto def = default_speech_shape(audio.sample_rate);
    const GroupShape shape{o.k1.value_or(def.k1), o.k2.value_or(def.k2)};
    cfg["k"] = shape.to_string();
    cfg["frame_len"] = plan.frame_len();
    for (double lam : grid) {
      const auto unit = OgsConfig::from_fraction(lam, shape, kind, o.beta, opt);
      const Denoiser<double> f = [&](std::span<const double> s) {
        return denoise_speech(s, plan, unit, o.sigma).signal;
      };
      auto e = mc_sure(std::span<const double>(audio.samples), o.sigma, f, so);
      e.lambda = lam;
      est.push_back(e);
    }
  } else {
    const auto y = read_column_csv(o.in);
    const GroupShape shape{1, o.k.value_or(5)};
    cfg["k"] = shape.to_string();
    for (double lam : grid) {
      const auto run = OgsConfig::from_fraction(lam * o.sigma, shape, kind, o.beta, opt);
      auto e = mc_sure(std::span<const double>(y), o.sigma, run, so);
      e.lambda = lam;
      est.push_back(e);
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < est.size(); ++i)
    if (est[i].estimated_mse < est[best].estimated_mse) best = i;

  auto out = open_out(o.out);
  write_provenance(out, o.seed, cfg);
  out << "# argmin lambda: " << est[best].lambda << '\n';
  out << "lambda,lambda_abs,sure_mse,sure_mse_per_sample,divergence,divergence_stderr,residual_sq\n";
  for (const auto& e : est)
    out << e.lambda << ',' << e.lambda * o.sigma << ',' << e.estimated_mse << ','
        << e.mse_per_sample() << ',' << e.divergence << ',' << e.divergence_stderr << ','
        << e.residual_sq << '\n';
  std::cout << "best lambda " << est[best].lambda << " (x sigma), estimated MSE per sample "
            << est[best].mse_per_sample() << '\n';
}

struct BenchmarkCmd {
  int seeds = 20;
  std::string out, mode = "max-snr";
  std::uint64_t first_seed = 1;
};

void run_benchmark(const BenchmarkCmd& o) {
  if (o.seeds < 1) throw UsageError("--seeds must be >= 1");
  const auto [mode, alpha] = split_mode(o.mode);
  BenchmarkSpec spec;
  if (mode == "alpha") spec.alpha = alpha;
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < o.seeds; ++i) seeds.push_back(o.first_seed + static_cast<std::uint64_t>(i));
  const auto res = benchmark_example1(seeds, spec);

  json runs = json::array();
  for (const auto& r : res.runs)
    runs.push_back({{"seed", r.seed},
                    {"sigma", r.sigma},
                    {"input_snr_db", r.input_snr_db},
                    {"output_snr_db", r.output_snr_db},
                    {"parameter", r.parameter}});
  const json report = {
      {"generator", kGenerator},
      {"seeds", seeds},
      {"config",
       {{"command", "benchmark-ex1"},
        {"mode", o.mode},
        {"n", spec.signal.n},
        {"n_groups", spec.signal.n_groups},
        {"group_len_range", {spec.signal.len_min, spec.signal.len_max}},
        {"amplitude_range", {spec.signal.amp_min, spec.signal.amp_max}},
        {"snr_db", spec.snr_db},
        {"k", spec.group_len},
        {"iterations", spec.iterations},
        {"grid", {{"points", spec.grid_points}, {"lo", spec.grid_lo}, {"hi", spec.grid_hi}}},
        {"calibration_samples", spec.calibration_samples},
        {"calibration_seed", spec.calibration_seed}}},
      {"runs", runs},
      {"mean_snr_db", res.mean_snr_db},
      {"unit_parameter", res.unit_parameter}};
  auto out = open_out(o.out);
  out << report.dump(2) << '\n';
  for (const auto& [name, v] : res.mean_snr_db)
    std::cout << name << ": " << v << " dB\n";
}

struct ThresholdCmd {
  std::string penalty = "atan";
  double lambda = 0.0, a = 0.0, y = 0.0;
};

void run_threshold(const ThresholdCmd& o) {
  const ThresholdProblem tp(o.lambda, Penalty(parse_penalty_kind(o.penalty), o.a));
  std::cout.precision(std::numeric_limits<double>::max_digits10);
  std::cout << scalar_threshold(tp, o.y) << '\n';
}

const std::vector<std::string> kPenalties = {"abs", "log", "atan", "rat", "rational"};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Overlapping group shrinkage toolkit"};
  app.require_subcommand(1);

  Denoise1d d1;
  auto* c_d1 = app.add_subcommand("denoise-1d", "Denoise a 1D signal stored as CSV");
  c_d1->add_option("--in", d1.in, "Input CSV (first column)")->required();
  c_d1->add_option("--out", d1.out, "Output CSV")->required();
  c_d1->add_option("--penalty", d1.penalty)->check(CLI::IsMember(kPenalties));
  auto* o_lam = c_d1->add_option("--lambda", d1.lambda, "Absolute lambda");
  auto* o_alpha = c_d1->add_option("--alpha", d1.alpha, "Target noise attenuation; lambda = lambda(alpha) sigma");
  o_lam->excludes(o_alpha);
  c_d1->add_option("--k", d1.k, "Group length")->check(CLI::PositiveNumber);
  c_d1->add_option("--beta", d1.beta, "a = beta / (K lambda)");
  c_d1->add_option("--iters", d1.iters)->check(CLI::PositiveNumber);
  c_d1->add_option("--sigma", d1.sigma, "Noise std (default: MAD estimate)");
  c_d1->add_option("--seed", d1.seed, "Seed for Monte-Carlo calibration");
  c_d1->add_option("--calib-samples", d1.calib_samples, "Noise samples per calibration step");

  DenoiseWav dw;
  auto* c_dw = app.add_subcommand("denoise-wav", "Denoise 16-bit PCM audio in the STFT domain");
  c_dw->add_option("--in", dw.in)->required();
  c_dw->add_option("--out", dw.out)->required();
  c_dw->add_option("--penalty", dw.penalty)->check(CLI::IsMember(kPenalties));
  c_dw->add_option("--k1", dw.k1, "Spectral group extent (default 8 at 16 kHz, 7 at 8 kHz)");
  c_dw->add_option("--k2", dw.k2, "Temporal group extent (default 2)");
  c_dw->add_option("--alpha", dw.alpha, "Target noise attenuation");
  c_dw->add_option("--sigma", dw.sigma, "Time-domain noise std (default: STFT high-band MAD)");
  c_dw->add_flag("--ewp", dw.ewp, "Empirical Wiener post-processing");
  c_dw->add_option("--seed", dw.seed, "Seed for Monte-Carlo calibration");
  c_dw->add_option("--calib-samples", dw.calib_samples);

  Calibrate cal;
  auto* c_cal = app.add_subcommand("calibrate", "Measure noise attenuation alpha(lambda)");
  c_cal->add_option("--penalty", cal.penalty)->required()->check(CLI::IsMember(kPenalties));
  c_cal->add_option("--beta", cal.beta)->required();
  c_cal->add_option("--k", cal.k, "K or K1xK2")->required();
  c_cal->add_option("--iters", cal.iters)->check(CLI::PositiveNumber);
  auto* o_ls = c_cal->add_option("--lambdas", cal.lambdas, "Comma-separated lambdas (units of sigma)");
  auto* o_ta = c_cal->add_option("--target-alpha", cal.target_alpha, "Solve for this alpha");
  o_ls->excludes(o_ta);
  c_cal->add_option("--out", cal.out)->required();
  c_cal->add_option("--seed", cal.seed)->required();
  c_cal->add_option("--samples", cal.samples, "Noise samples per estimate");
  c_cal->add_flag("--complex", cal.complex_noise, "Complex Gaussian noise");

  SureScanCmd ss;
  auto* c_ss = app.add_subcommand("sure-scan", "MC-SURE over a log-spaced lambda grid");
  c_ss->add_option("--in", ss.in, "CSV (1D OGS) or WAV (STFT pipeline)")->required();
  c_ss->add_option("--sigma", ss.sigma)->required();
  c_ss->add_option("--lambda-min", ss.lambda_min, "Units of sigma")->required();
  c_ss->add_option("--lambda-max", ss.lambda_max, "Units of sigma")->required();
  c_ss->add_option("--points", ss.points)->required()->check(CLI::PositiveNumber);
  c_ss->add_option("--out", ss.out)->required();
  c_ss->add_option("--seed", ss.seed)->required();
  c_ss->add_option("--penalty", ss.penalty)->check(CLI::IsMember(kPenalties));
  c_ss->add_option("--beta", ss.beta);
  c_ss->add_option("--iters", ss.iters)->check(CLI::PositiveNumber);
  c_ss->add_option("--k", ss.k, "Group length for CSV input (default 5)");
  c_ss->add_option("--k1", ss.k1);
  c_ss->add_option("--k2", ss.k2);
  c_ss->add_option("--probes", ss.probes)->check(CLI::PositiveNumber);

  BenchmarkCmd bm;
  auto* c_bm = app.add_subcommand("benchmark-ex1", "Group-sparse benchmark over seeds");
  c_bm->add_option("--seeds", bm.seeds, "Number of seeds")->required();
  c_bm->add_option("--out", bm.out)->required();
  c_bm->add_option("--mode", bm.mode, "max-snr or alpha:<f>");
  c_bm->add_option("--first-seed", bm.first_seed);

  ThresholdCmd th;
  auto* c_th = app.add_subcommand("threshold", "Print theta(y)");
  c_th->add_option("--penalty", th.penalty)->required()->check(CLI::IsMember(kPenalties));
  c_th->add_option("--lambda", th.lambda)->required();
  c_th->add_option("--a", th.a)->required();
  c_th->add_option("--y", th.y)->required()->allow_extra_args(false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*c_d1) {
      if (!d1.lambda && !d1.alpha) throw UsageError("denoise-1d needs --lambda or --alpha");
      run_denoise_1d(d1);
    } else if (*c_dw) {
      run_denoise_wav(dw);
    } else if (*c_cal) {
      if (cal.lambdas.empty() && !cal.target_alpha)
        throw UsageError("calibrate needs --lambdas or --target-alpha");
      run_calibrate(cal);
    } else if (*c_ss) {
      run_sure_scan(ss);
    } else if (*c_bm) {
      run_benchmark(bm);
    } else if (*c_th) {
      run_threshold(th);
    }
  } catch (const UsageError& e) {
    std::cerr << "ogstk: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "ogstk: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
