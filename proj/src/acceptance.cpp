#include "urnsa/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "urnsa/error.hpp"
#include "urnsa/limit_theory.hpp"
#include "urnsa/polya_urn.hpp"
#include "urnsa/report.hpp"
#include "urnsa/rng.hpp"
#include "urnsa/special.hpp"

namespace urnsa {

const char* to_string(Suite s) noexcept { return s == Suite::Quick ? "quick" : "full"; }

Suite suite_from_string(const std::string& s) {
  if (s == "quick") return Suite::Quick;
  if (s == "full") return Suite::Full;
  throw Error(ErrorCode::Configuration, "unknown suite '" + s + "' (expected quick or full)");
}

namespace {

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel_err(double value, double target) { return value / target - 1.0; }

EnsembleConfig urn_config(const ReplacementMatrix& m, double W0, double B0, std::uint64_t horizon,
                          std::uint64_t paths, const AcceptanceOptions& o) {
  EnsembleConfig cfg;
  cfg.model = UrnModel{m, W0, B0};
  cfg.horizon = horizon;
  cfg.paths = paths;
  cfg.master_seed = o.seed;
  cfg.convention = ScalingConvention::Plain;
  cfg.threads = o.threads;
  cfg.kernel = o.kernel;
  return cfg;
}

std::string ks_text(const KsVerdict& ks) {
  return fmt("KS(%s) D=%.5f crit5=%.5f crit1=%.5f", ks.reference.c_str(), ks.statistic, ks.critical_5,
             ks.critical_1);
}

CriterionResult clt_variance(int id, const char* name, const EnsembleConfig& cfg, double target, double tol,
                             bool with_ks) {
  const EnsembleResult r = run_ensemble(cfg);
  const double rel = rel_err(r.summary.variance, target);
  bool ok = std::abs(rel) <= tol;
  std::string text = fmt("var=%.6g target=%.6g rel=%+.2f%% tol=%.0f%%", r.summary.variance, target, 100 * rel,
                         100 * tol);
  if (with_ks) {
    ok = ok && r.ks && r.ks->reference == "predicted_normal" && !r.ks->reject_1;
    if (r.ks) text += "; " + ks_text(*r.ks) + (r.ks->reject_1 ? " rejected at 1%" : " not rejected at 1%");
  }
  return {id, name, ok, text};
}

// ---------------------------------------------------------------------------
// Criterion 7: exact invariants.

struct Tally {
  bool ok = true;
  std::vector<std::string> notes;
  void add(bool pass, std::string note) {
    ok = ok && pass;
    notes.push_back((pass ? "" : "FAILED ") + std::move(note));
  }
};

ReplacementMatrix random_integer_matrix(Xoshiro256pp& rng) {
  for (;;) {
    ReplacementMatrix m{double(rng() % 10), double(rng() % 10), double(rng() % 10), double(rng() % 10)};
    if (m.sa_eligible()) return m;
  }
}

double uniform(Xoshiro256pp& rng) { return uniform_from_bits(rng()); }
double uniform(Xoshiro256pp& rng, double lo, double hi) { return lo + (hi - lo) * uniform(rng); }

void check_martingale(Tally& t, Xoshiro256pp& rng) {
  const double black_u = std::nextafter(1.0, 0.0);
  double worst_mean = 0.0, worst_var = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const ReplacementMatrix m = random_integer_matrix(rng);
    UrnState s = UrnState::initial(double(1 + rng() % 10), double(1 + rng() % 10));
    const std::uint64_t steps = rng() % 200;
    for (std::uint64_t k = 0; k < steps; ++k) s = urn_step(s, m, uniform(rng));
    const DriftPoly f = drift_from_matrix(m);
    const ErrorPoly e = error_poly_from_matrix(m);
    const double x = s.X();
    const double uw = urn_noise(s, urn_step(s, m, 0.0), f);
    const double ub = urn_noise(s, urn_step(s, m, black_u), f);
    const double mean = x * uw + (1 - x) * ub;
    const double second = x * uw * uw + (1 - x) * ub * ub;
    worst_mean = std::max(worst_mean, std::abs(mean));
    worst_var = std::max(worst_var, std::abs(second - e(x)));
  }
  t.add(worst_mean <= 1e-12 && worst_var <= 1e-12,
        fmt("martingale max|E U|=%.2e max|E U^2-E(X)|=%.2e", worst_mean, worst_var));
}

void check_bookkeeping(Tally& t, Xoshiro256pp& rng) {
  std::uint64_t mismatches = 0, checked = 0;
  for (int i = 0; i < 200; ++i) {
    const ReplacementMatrix m = random_integer_matrix(rng);
    const double W0 = double(1 + rng() % 10), B0 = double(1 + rng() % 10);
    UrnState s = UrnState::initial(W0, B0);
    for (int k = 0; k < 500; ++k) {
      s = urn_step(s, m, uniform(rng));
      const double n = double(s.n), ws = double(s.W_star);
      const bool w_ok = s.W == W0 + m.c * n + (m.a - m.c) * ws;
      const bool t_ok = s.T() == W0 + B0 + m.black_row_sum() * n - m.alpha() * ws;
      mismatches += !(w_ok && t_ok);
      ++checked;
    }
  }
  t.add(mismatches == 0, fmt("bookkeeping %llu/%llu states exact", (unsigned long long)(checked - mismatches),
                             (unsigned long long)checked));
}

void check_alpha0_variance(Tally& t, Xoshiro256pp& rng) {
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double b = uniform(rng, 0.1, 5.0), c = uniform(rng, 0.1, 5.0);
    const double top = b + 2 * c;
    // Every tenth matrix sits exactly on the critical line a = b + 2c.
    double a = top;
    if (i % 10 != 0) {
      do a = uniform(rng, std::max(0.0, c - b), 0.98 * top);
      while (a == c);
    }
    const ReplacementMatrix m{a, b, c, a + b - c};
    const LimitPrediction pred = classify(m);
    if (!pred.predicted_variance) {
      worst = std::numeric_limits<double>::infinity();
      break;
    }
    worst = std::max(worst, std::abs(rel_err(variance_alpha0(m), *pred.predicted_variance)));
  }
  t.add(worst <= 1e-12, fmt("alpha=0 closed form vs general: max rel err %.2e", worst));
}

void check_p_alpha(Tally& t) {
  // m |P_alpha(m,n) (n/m)^alpha - 1| stays below one constant for every n.
  constexpr double kBound = 1.0;
  double worst = 0.0;
  for (std::uint64_t m : {2ULL, 10ULL, 100ULL, 1000ULL}) {
    for (double alpha : {0.1, 0.4, 0.9}) {
      for (std::uint64_t n = m; n <= 4000000; n = n * 3 + 1) {
        const double ratio = product_P_alpha(m, n, alpha) * std::pow(double(n) / double(m), alpha);
        worst = std::max(worst, double(m) * std::abs(ratio - 1.0));
      }
    }
  }
  t.add(worst <= kBound, fmt("P_alpha: max m|P (n/m)^a - 1| = %.4f (bound %.1f)", worst, kBound));
}

void check_chung(Tally& t) {
  const double fixed = chung_recursion(2.0, 1.5, 3.0, StepFamily::N, 100000);
  const double half = chung_recursion(0.0, 2.0, 1.0, StepFamily::N, 1000000);
  const double decay = chung_recursion(5.0, 1.0, 0.0, StepFamily::NLogN, 1000000);
  constexpr double kDecayOracle = 0.08463992648439107;
  const bool ok = std::abs(fixed - 2.0) <= 1e-12 && std::abs(half - 0.5) <= 1e-3 &&
                  std::abs(rel_err(decay, kDecayOracle)) <= 1e-9;
  t.add(ok, fmt("chung fixed=%.15g half=%.9f nlogn-decay=%.10f", fixed, half, decay));
}

void check_gamma_fn(Tally& t) {
  struct Spot {
    double x, value;
  };
  const Spot spots[] = {{5.0, 24.0},
                        {0.5, std::sqrt(std::numbers::pi)},
                        {0.2, 4.5908437119988030532},
                        {1.5, 0.88622692545275801365},
                        {1.2, 0.91816874239976061064},
                        {3.7, 4.1706517837966031654}};
  double worst = 0.0;
  for (const Spot& s : spots) worst = std::max(worst, std::abs(rel_err(gamma_fn(s.x), s.value)));
  t.add(worst <= 1e-10, fmt("gamma_fn spot values max rel err %.2e", worst));
}

void check_singular_monotone(Tally& t, Xoshiro256pp& rng) {
  const ReplacementMatrix family[] = {{2, 2, 1, 1}, {1, 3, 2, 6}, {5, 1, 10, 2}, {4, 1, 4, 1}};
  std::uint64_t bad = 0, paths = 0;
  for (const ReplacementMatrix& m : family) {
    for (int i = 0; i < 25; ++i) {
      UrnState s = UrnState::initial(double(1 + rng() % 6), double(1 + rng() % 6));
      // Compare fractions by cross-multiplication: every product is an exact integer.
      const double side0 = s.W * (m.a + m.b) - m.a * s.T();
      bool ok = true;
      for (int k = 0; k < 1024 && ok; ++k) {
        const UrnState next = urn_step(s, m, uniform(rng));
        const double move = next.W * s.T() - s.W * next.T();
        const double side = next.W * (m.a + m.b) - m.a * next.T();
        if (side0 < 0) ok = move > 0 && side < 0;
        else if (side0 > 0) ok = move < 0 && side > 0;
        else ok = move == 0 && side == 0;
        s = next;
      }
      bad += !ok;
      ++paths;
    }
  }
  t.add(bad == 0, fmt("singular monotone %llu/%llu paths", (unsigned long long)(paths - bad),
                      (unsigned long long)paths));
}

CriterionResult criterion_invariants(const AcceptanceOptions& o) {
  Xoshiro256pp rng(o.seed, 7);
  Tally t;
  check_martingale(t, rng);
  check_bookkeeping(t, rng);
  check_alpha0_variance(t, rng);
  check_p_alpha(t);
  check_chung(t);
  check_gamma_fn(t);
  check_singular_monotone(t, rng);
  std::string text;
  for (const std::string& n : t.notes) text += (text.empty() ? "" : "; ") + n;
  return {7, "exact-invariants", t.ok, text};
}

// ---------------------------------------------------------------------------
// Criterion 8: path-wise convergence witnesses.

CriterionResult criterion_as_witness(const AcceptanceOptions& o) {
  std::vector<std::uint64_t> at;
  for (int k = 10; k <= 22; ++k) at.push_back(std::uint64_t{1} << k);

  const UrnModel janson{kJansonMatrix, 1.0, 1.0};
  const LimitPrediction pred = classify(janson.matrix);
  const double exponent = *pred.as_exponent;
  constexpr std::uint64_t kPaths = 500;
  constexpr double kRequiredShare = 0.95;
  const auto fractions = simulate_urn_checkpoints(janson, at, kPaths, o.seed, o.threads, o.kernel);
  std::uint64_t decreasing = 0;
  std::vector<Checkpoint> path(at.size());
  for (std::uint64_t i = 0; i < kPaths; ++i) {
    for (std::size_t k = 0; k < at.size(); ++k) path[k] = {at[k], fractions[k][i]};
    const std::vector<double> dev = successive_deviations(path, pred.p, exponent);
    const auto mid = dev.begin() + std::ptrdiff_t(dev.size() / 2);
    decreasing += *std::max_element(mid, dev.end()) < *std::max_element(dev.begin(), mid);
  }
  const double share = double(decreasing) / double(kPaths);
  const bool share_ok = share >= kRequiredShare;

  // gamma_hat = 1/2 urns with a+b = c+d = s and T0 = 2: 1/2 - gamma_hat_n = 1/(2 + s n) exactly.
  const ReplacementMatrix critical[] = {{3, 1, 1, 3}, {4, 2, 1, 5}};
  double worst_gap = 0.0;
  const std::span<const std::uint64_t> tail(at.begin() + std::ptrdiff_t(at.size() / 2), at.end());
  for (const ReplacementMatrix& m : critical) {
    const LimitPrediction cp = classify(m);
    for (std::uint64_t i = 0; i < 10; ++i) {
      const auto trace = trace_urn_path({m, 1.0, 1.0}, tail, o.seed, i);
      worst_gap = std::max(worst_gap, *gamma_hat_rate_check(trace, m, cp).max_log_gap);
    }
  }
  const bool gap_ok = worst_gap <= 0.01;
  return {8, "as-convergence-witness", share_ok && gap_ok,
          fmt("tail deviations shrink in %.3f of %llu paths (need >= %.2f); max |gamma_hat_n-1/2| ln n = %.3e "
              "(need <= 0.01)",
              share, (unsigned long long)kPaths, kRequiredShare, worst_gap)};
}

// ---------------------------------------------------------------------------
// Criterion 9: byte-level determinism.

std::string artifact_bytes(const EnsembleConfig& cfg) {
  const EnsembleResult r = run_ensemble(cfg);
  std::ostringstream os;
  os << summary_json(cfg, r).dump(2) << '\n';
  write_values_csv(os, r.values);
  return os.str();
}

CriterionResult criterion_determinism(Suite suite, const AcceptanceOptions& o) {
  const bool full = suite == Suite::Full;
  EnsembleConfig urn = urn_config({4, 5, 3, 2}, 1.0, 1.0, full ? 100000 : 10000, full ? 4096 : 500, o);
  urn.convention = ScalingConvention::Weight;
  EnsembleConfig syn = urn;
  syn.model = SyntheticModel{SyntheticProcess{}};

  Tally t;
  for (const EnsembleConfig* base : {&urn, &syn}) {
    const char* label = std::holds_alternative<UrnModel>(base->model) ? "urn" : "synthetic";
    const std::string ref = artifact_bytes(*base);
    t.add(ref == artifact_bytes(*base), fmt("%s repeat identical", label));

    EnsembleConfig single = *base, multi = *base;
    single.threads = 1;
    multi.threads = 4;
    t.add(artifact_bytes(single) == artifact_bytes(multi), fmt("%s 1 vs 4 threads identical", label));

    EnsembleConfig scalar = *base;
    scalar.kernel = KernelKind::Scalar;
    EnsembleConfig simd = *base;
    simd.kernel = resolve_kernel(KernelKind::Auto);
    t.add(artifact_bytes(scalar) == artifact_bytes(simd),
          fmt("%s scalar vs %s identical", label, to_string(simd.kernel)));
  }
  std::string text = fmt("%zu-byte artifacts: ", artifact_bytes(urn).size());
  for (std::size_t i = 0; i < t.notes.size(); ++i) text += (i ? "; " : "") + t.notes[i];
  return {9, "determinism", t.ok, text};
}

}  // namespace

std::string format_result(const CriterionResult& r) {
  return fmt("%s  %d %-24s %s", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.measured.c_str());
}

std::vector<CriterionResult> run_acceptance(Suite suite, const AcceptanceOptions& o, std::ostream* log) {
  std::vector<CriterionResult> out;
  auto record = [&](CriterionResult r) {
    if (log) *log << format_result(r) << std::endl;
    out.push_back(std::move(r));
  };

  if (suite == Suite::Full) {
    record(clt_variance(1, "toy-clt", urn_config({4, 5, 3, 2}, 1, 1, 100000, 20000, o), 1.0 / 252, 0.10, true));
    record(clt_variance(2, "alpha0-clt", urn_config({2, 1, 1, 2}, 1, 1, 100000, 20000, o), 1.0 / 12, 0.10, true));
    record(clt_variance(3, "critical-clt", urn_config({3, 1, 1, 3}, 1, 1, 1000000, 10000, o), 1.0 / 16, 0.20,
                        false));

    {
      const EnsembleResult r = run_ensemble(urn_config(kJansonMatrix, 4, 4, 1000000, 20000, o));
      const double target = predicted_scaled_mean(4, 4);
      const double mean = -r.summary.mean;  // values are n^(2/5)(X_n - 1/2)
      const double rel = rel_err(mean, target);
      const bool mean_ok = std::abs(rel) <= 0.10;
      const bool non_normal = r.ks && r.ks->reference == "fitted_normal" && r.ks->reject_5;
      std::string text = fmt("mean n^(2/5)(1/2-X)=%.5f target=%.5f rel=%+.1f%% tol=10%%", mean, target, 100 * rel);
      if (r.ks) text += "; " + ks_text(*r.ks) + (r.ks->reject_5 ? " rejected at 5%" : " not rejected at 5%");
      record({4, "power-law-mean", mean_ok && non_normal, text});
    }

    {
      const EnsembleResult r = run_ensemble(urn_config({1, 2, 2, 1}, 1, 1, 100000, 20000, o));
      const double skew = r.summary.skewness.value_or(std::numeric_limits<double>::quiet_NaN());
      record({5, "symmetry", std::abs(skew) <= 0.05, fmt("skewness=%+.4f (need |.| <= 0.05)", skew)});
    }

    {
      EnsembleConfig cfg = urn_config({1, 1, 1, 1}, 1, 1, 100000, 20000, o);
      cfg.model = SyntheticModel{SyntheticProcess{1.0, 1.0, 1.0, StepFamily::N, 0.0}};
      EnsembleResult r = run_ensemble(cfg);
      const double rel = rel_err(r.summary.variance, 0.5);
      const bool ok = std::abs(rel) <= 0.05 && r.ks && !r.ks->reject_1;
      std::string text = fmt("var=%.6g target=0.5 rel=%+.2f%% tol=5%%", r.summary.variance, 100 * rel);
      if (r.ks) text += "; " + ks_text(*r.ks) + (r.ks->reject_1 ? " rejected at 1%" : " not rejected at 1%");
      record({6, "synthetic-clt", ok, text});
    }
  }

  record(criterion_invariants(o));
  if (suite == Suite::Full) record(criterion_as_witness(o));
  record(criterion_determinism(suite, o));
  return out;
}

}  // namespace urnsa
