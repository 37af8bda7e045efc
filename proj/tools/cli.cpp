#include "cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <thread>
#include <vector>

#include "urnsa/acceptance.hpp"
#include "urnsa/ensemble.hpp"
#include "urnsa/error.hpp"
#include "urnsa/limit_theory.hpp"
#include "urnsa/report.hpp"

namespace urnsa::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

template <class T>
bool parse_whole(std::string_view s, T& value) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

/// Counts such as 100000 or 1e5; must be a non-negative integer below 2^63.
std::uint64_t parse_count(const std::string& text, const char* what) {
  std::uint64_t n = 0;
  if (parse_whole(trim(text), n)) return n;
  const double v = parse_number(text);
  if (!(v >= 0.0 && v < 9.2e18) || std::floor(v) != v)
    throw Error(ErrorCode::Configuration, std::string(what) + " must be a non-negative integer, got '" + text + "'");
  return static_cast<std::uint64_t>(v);
}

std::filesystem::path output_path(const std::string& name) {
  std::filesystem::path p(name);
  if (p.is_relative()) {
    if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) p = std::filesystem::path(dir) / p;
  }
  return p;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
  f << bytes;
  f.close();
  if (!f) throw Error(ErrorCode::Io, "failed writing '" + path.string() + "'");
}

struct Options {
  std::string matrix;
  double W0 = 1.0;
  double B0 = 1.0;
  std::string horizon = "100000";
  std::string paths = "10000";
  std::uint64_t seed = kDefaultSeed;
  std::string out;
  std::string format = "json";
  std::optional<double> scale_x, scale_y;
  std::string convention = "weight";
  double checkpoint_factor = 2.0;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::string kernel = "auto";
  std::uint64_t path_index = 0;
  double gamma = 1.0;
  double sigma2 = 1.0;
  std::optional<double> noise_bound;
  std::string family = "n";
  double z0 = 0.0;
  std::string suite = "quick";
};

ScalingConvention convention_of(const Options& o) {
  return o.convention == "plain" ? ScalingConvention::Plain : ScalingConvention::Weight;
}

std::optional<Scaling> forced_scaling(const Options& o) {
  if (!o.scale_x && !o.scale_y) return std::nullopt;
  return Scaling{o.scale_x.value_or(0.0), o.scale_y.value_or(0.0)};
}

EnsembleConfig ensemble_config(const Options& o) {
  EnsembleConfig cfg;
  cfg.horizon = parse_count(o.horizon, "--horizon");
  cfg.paths = parse_count(o.paths, "--paths");
  cfg.master_seed = o.seed;
  cfg.checkpoint_factor = o.checkpoint_factor;
  cfg.forced_scaling = forced_scaling(o);
  cfg.convention = convention_of(o);
  cfg.threads = o.threads;
  cfg.kernel = kernel_from_string(o.kernel);
  return cfg;
}

void emit_ensemble(const Options& o, const EnsembleConfig& cfg, std::ostream& out) {
  const EnsembleResult result = run_ensemble(cfg);
  const std::string json = summary_json(cfg, result).dump(2) + "\n";
  std::ostringstream csv;
  write_values_csv(csv, result.values);
  if (o.out.empty()) {
    out << (o.format == "csv" ? csv.str() : json);
    return;
  }
  const std::filesystem::path prefix = output_path(o.out);
  std::filesystem::path csv_path = prefix, json_path = prefix;
  csv_path += ".csv";
  json_path += ".json";
  write_file(csv_path, csv.str());
  write_file(json_path, json);
  out << "wrote " << csv_path.string() << " and " << json_path.string() << '\n';
}

void emit_text(const Options& o, const std::string& text, std::ostream& out) {
  if (o.out.empty()) out << text;
  else write_file(output_path(o.out), text);
}

int cmd_analyze(const Options& o, std::ostream& out) {
  const ReplacementMatrix m = parse_matrix(o.matrix);
  emit_text(o, analysis_json(m, o.W0, o.B0).dump(2) + "\n", out);
  return kOk;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  EnsembleConfig cfg = ensemble_config(o);
  cfg.model = UrnModel{parse_matrix(o.matrix), o.W0, o.B0};
  emit_ensemble(o, cfg, out);
  return kOk;
}

int cmd_path(const Options& o, std::ostream& out) {
  const ReplacementMatrix m = parse_matrix(o.matrix);
  m.require_sa();
  const UrnModel model{m, o.W0, o.B0};
  const std::uint64_t horizon = parse_count(o.horizon, "--horizon");
  if (horizon > max_exact_horizon(m, o.W0 + o.B0))
    throw Error(ErrorCode::Configuration, "horizon would push ball counts past 2^53");
  std::vector<std::uint64_t> at{0};
  if (horizon > 0) {
    const auto rest = geometric_checkpoints(1, horizon, o.checkpoint_factor);
    at.insert(at.end(), rest.begin(), rest.end());
  }
  const LimitPrediction pred = classify(m);
  Scaling scaling = pred.scaling;
  if (auto forced = forced_scaling(o)) scaling = *forced;
  const auto trace = trace_urn_path(model, at, o.seed, o.path_index);
  std::ostringstream csv;
  write_path_csv(csv, trace, m, pred, scaling, convention_of(o));
  emit_text(o, csv.str(), out);
  return kOk;
}

int cmd_synthetic(const Options& o, std::ostream& out) {
  SyntheticProcess proc;
  proc.gamma = o.gamma;
  proc.sigma2 = o.sigma2;
  proc.noise_bound = o.noise_bound.value_or(o.sigma2);
  proc.step_family = step_family_from_string(o.family);
  proc.z0 = o.z0;
  proc.validate();
  EnsembleConfig cfg = ensemble_config(o);
  cfg.model = SyntheticModel{proc};
  emit_ensemble(o, cfg, out);
  return kOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  AcceptanceOptions opts;
  opts.threads = o.threads;
  opts.kernel = kernel_from_string(o.kernel);
  opts.seed = o.seed;
  const auto results = run_acceptance(suite_from_string(o.suite), opts, &out);
  std::size_t passed = 0;
  for (const auto& r : results) passed += r.passed;
  out << passed << '/' << results.size() << " criteria passed\n";
  return passed == results.size() ? kOk : kAcceptanceFailed;
}

}  // namespace

double parse_number(std::string_view text) {
  const std::string_view s = trim(text);
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    long long num = 0, den = 0;
    if (!parse_whole(trim(s.substr(0, slash)), num) || !parse_whole(trim(s.substr(slash + 1)), den))
      throw Error(ErrorCode::Configuration, "'" + std::string(text) + "' is not a ratio of integers");
    if (den == 0) throw Error(ErrorCode::Configuration, "'" + std::string(text) + "' has a zero denominator");
    return static_cast<double>(num) / static_cast<double>(den);
  }
  double v = 0.0;
  if (s.empty() || !parse_whole(s, v) || !std::isfinite(v))
    throw Error(ErrorCode::Configuration, "'" + std::string(text) + "' is not a finite number");
  return v;
}

ReplacementMatrix parse_matrix(std::string_view text) {
  std::vector<double> entries;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = text.find(',', start);
    entries.push_back(parse_number(text.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (entries.size() != 4)
    throw Error(ErrorCode::Configuration, "matrix needs four entries a,b,c,d, got " + std::to_string(entries.size()));
  return {entries[0], entries[1], entries[2], entries[3]};
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-colour urns as stochastic approximation: analysis, simulation and limit checks", "urnsa"};
  app.require_subcommand(1);
  Options o;

  const auto add_matrix = [&](CLI::App* sub) {
    sub->add_option("-m,--matrix", o.matrix, "replacement matrix a,b,c,d (row-major, fractions like 1/3 allowed)")
        ->required();
    sub->add_option("--w0", o.W0, "initial white balls")->capture_default_str();
    sub->add_option("--b0", o.B0, "initial black balls")->capture_default_str();
  };
  const auto add_run = [&](CLI::App* sub) {
    sub->add_option("--horizon", o.horizon, "number of draws (or steps)")->capture_default_str();
    sub->add_option("--seed", o.seed, "master seed")->capture_default_str();
    sub->add_option("--out", o.out, "output file (simulate/synthetic: prefix for .csv and .json)");
    sub->add_option("--convention", o.convention, "scaling form: weight (n+1)^x ln(n+1)^y or plain n^x ln(n)^y")
        ->check(CLI::IsMember({"weight", "plain"}))
        ->capture_default_str();
    sub->add_option("--checkpoint-factor", o.checkpoint_factor, "ratio between recorded checkpoints")
        ->capture_default_str();
    sub->add_option("--scale-x", o.scale_x, "force the power exponent of the scaling");
    sub->add_option("--scale-y", o.scale_y, "force the log exponent of the scaling");
  };
  const auto add_ensemble = [&](CLI::App* sub) {
    sub->add_option("--paths", o.paths, "number of independent paths")->capture_default_str();
    sub->add_option("--format", o.format, "stdout format when --out is absent")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
  };
  const auto add_exec = [&](CLI::App* sub) {
    sub->add_option("--threads", o.threads, "worker threads (output does not depend on it)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--kernel", o.kernel, "auto, scalar, avx2 or avx512")
        ->check(CLI::IsMember({"auto", "scalar", "avx2", "avx512"}))
        ->capture_default_str();
  };

  CLI::App* analyze = app.add_subcommand("analyze", "drift, zeros, regime and predicted limit of an urn");
  add_matrix(analyze);
  analyze->add_option("--out", o.out, "write the JSON report to this file");

  CLI::App* simulate = app.add_subcommand("simulate", "ensemble of urn paths, scaled at the horizon");
  add_matrix(simulate);
  add_run(simulate);
  add_ensemble(simulate);
  add_exec(simulate);

  CLI::App* path = app.add_subcommand("path", "one urn path at geometric checkpoints");
  add_matrix(path);
  add_run(path);
  path->add_option("--path-index", o.path_index, "which path of the seeded ensemble to replay")
      ->capture_default_str();

  CLI::App* synthetic = app.add_subcommand("synthetic", "Z_{n+1} = (1 - Gamma/g_n) Z_n + V/sqrt(g_n) ensemble");
  add_run(synthetic);
  add_ensemble(synthetic);
  add_exec(synthetic);
  synthetic->add_option("--gamma", o.gamma, "Gamma > 0")->capture_default_str();
  synthetic->add_option("--sigma2", o.sigma2, "noise variance > 0")->capture_default_str();
  synthetic->add_option("--noise-bound", o.noise_bound, "bound C_V >= sigma2 (default sigma2)");
  synthetic->add_option("--family", o.family, "step divisor g_n: n or nlogn")
      ->check(CLI::IsMember({"n", "nlogn"}))
      ->capture_default_str();
  synthetic->add_option("--z0", o.z0, "starting value")->capture_default_str();

  CLI::App* verify = app.add_subcommand("verify", "run the acceptance suite");
  verify->add_option("--suite", o.suite, "quick or full")
      ->check(CLI::IsMember({"quick", "full"}))
      ->capture_default_str();
  verify->add_option("--seed", o.seed, "master seed")->capture_default_str();
  add_exec(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  try {
    if (*analyze) return cmd_analyze(o, out);
    if (*simulate) return cmd_simulate(o, out);
    if (*path) return cmd_path(o, out);
    if (*synthetic) return cmd_synthetic(o, out);
    return cmd_verify(o, out);
  } catch (const Error& e) {
    err << "urnsa: " << e.what() << '\n';
    return e.code() == ErrorCode::Io ? kIo : kUsage;
  } catch (const std::exception& e) {
    err << "urnsa: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace urnsa::cli
