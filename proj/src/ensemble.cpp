#include "urnsa/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "urnsa/error.hpp"
#include "urnsa/rng.hpp"
#include "urnsa/special.hpp"

namespace urnsa {

namespace {

constexpr std::size_t kBlockLanes = 64;

unsigned worker_count(unsigned requested, std::size_t blocks) {
  unsigned t = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  return static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(blocks, 1)));
}

// Runs body(block_index) for every block. Blocks write disjoint outputs, so
// the result does not depend on the number of workers or their timing.
template <typename Body>
void for_each_block(std::size_t blocks, unsigned threads, Body&& body) {
  const unsigned workers = worker_count(threads, blocks);
  if (workers <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) body(b);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      try {
        for (std::size_t b = next++; b < blocks; b = next++) body(b);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

std::vector<std::vector<double>> simulate_synthetic_checkpoints(const SyntheticProcess& proc,
                                                                std::uint64_t start,
                                                                std::span<const std::uint64_t> at,
                                                                std::uint64_t paths, std::uint64_t seed,
                                                                unsigned threads, KernelKind kernel) {
  std::vector<std::vector<double>> out(at.size(), std::vector<double>(paths));
  const std::size_t blocks = (paths + kBlockLanes - 1) / kBlockLanes;
  for_each_block(blocks, threads, [&](std::size_t block) {
    const std::uint64_t first = block * kBlockLanes;
    const std::size_t lanes = static_cast<std::size_t>(std::min<std::uint64_t>(kBlockLanes, paths - first));
    LaneRng rng(lanes);
    rng.seed(seed, first);
    std::vector<double> z(lanes, proc.z0);
    std::uint64_t n = start;
    for (std::size_t i = 0; i < at.size(); ++i) {
      advance_synthetic({z, &rng}, proc, n, at[i], kernel);
      n = at[i];
      std::copy(z.begin(), z.end(), out[i].begin() + static_cast<std::ptrdiff_t>(first));
    }
  });
  return out;
}

}  // namespace

const char* to_string(ScalingConvention c) noexcept {
  return c == ScalingConvention::Weight ? "weight" : "plain";
}

std::vector<std::uint64_t> geometric_checkpoints(std::uint64_t start, std::uint64_t horizon, double factor) {
  if (!(factor > 1.0)) throw Error(ErrorCode::Configuration, "checkpoint factor must exceed 1");
  std::vector<std::uint64_t> out;
  if (horizon <= start) {
    out.push_back(horizon);
    return out;
  }
  double next = static_cast<double>(std::max<std::uint64_t>(start, 1));
  while (next < static_cast<double>(horizon)) {
    const auto n = static_cast<std::uint64_t>(next);
    if (out.empty() || n > out.back()) out.push_back(n);
    next *= factor;
  }
  out.push_back(horizon);
  return out;
}

void EnsembleConfig::validate() const {
  if (paths < 1) throw Error(ErrorCode::Configuration, "ensemble needs at least one path");
  if (!(checkpoint_factor > 1.0)) throw Error(ErrorCode::Configuration, "checkpoint factor must exceed 1");
  if (const auto* urn = std::get_if<UrnModel>(&model)) {
    urn->matrix.require_sa();
    (void)UrnState::initial(urn->W0, urn->B0);
    if (horizon > max_exact_horizon(urn->matrix, urn->W0 + urn->B0))
      throw Error(ErrorCode::Configuration, "horizon would push ball counts past 2^53");
  } else {
    const auto& syn = std::get<SyntheticModel>(model);
    syn.process.validate();
    if (horizon < start_index())
      throw Error(ErrorCode::Configuration,
                  "synthetic horizon must be at least the first index with g_n > Gamma (" +
                      std::to_string(start_index()) + ")");
  }
}

std::uint64_t EnsembleConfig::start_index() const {
  if (const auto* syn = std::get_if<SyntheticModel>(&model))
    return first_contracting_index(syn->process.step_family, syn->process.gamma);
  return 0;
}

std::vector<std::uint64_t> EnsembleConfig::checkpoints() const {
  return geometric_checkpoints(start_index(), horizon, checkpoint_factor);
}

double scale_factor(std::uint64_t n, Scaling s, ScalingConvention c) {
  if (n == 0) return 1.0;
  if (c == ScalingConvention::Weight) return weight(n, s.x, s.y);
  if (s.y != 0.0 && n < 2) return 1.0;
  const auto dn = static_cast<double>(n);
  double f = s.x == 0.0 ? 1.0 : std::pow(dn, s.x);
  if (s.y != 0.0) f *= std::pow(std::log(dn), s.y);
  return f;
}

std::vector<std::vector<double>> simulate_urn_checkpoints(const UrnModel& model, std::span<const std::uint64_t> at,
                                                          std::uint64_t paths, std::uint64_t master_seed,
                                                          unsigned threads, KernelKind kernel) {
  if (!std::is_sorted(at.begin(), at.end()))
    throw Error(ErrorCode::Configuration, "checkpoints must be increasing");
  std::vector<std::vector<double>> out(at.size(), std::vector<double>(paths));
  const std::size_t blocks = (paths + kBlockLanes - 1) / kBlockLanes;
  for_each_block(blocks, threads, [&](std::size_t block) {
    const std::uint64_t first = block * kBlockLanes;
    const std::size_t lanes = static_cast<std::size_t>(std::min<std::uint64_t>(kBlockLanes, paths - first));
    LaneRng rng(lanes);
    rng.seed(master_seed, first);
    std::vector<double> W(lanes, model.W0);
    std::vector<double> T(lanes, model.W0 + model.B0);
    std::uint64_t n = 0;
    for (std::size_t i = 0; i < at.size(); ++i) {
      advance_urn({W, T, &rng}, model.matrix, at[i] - n, kernel);
      n = at[i];
      for (std::size_t j = 0; j < lanes; ++j) out[i][first + j] = W[j] / T[j];
    }
  });
  return out;
}

EnsembleResult run_ensemble(const EnsembleConfig& cfg) {
  cfg.validate();
  const std::vector<std::uint64_t> at = cfg.checkpoints();
  EnsembleResult result;
  std::vector<std::vector<double>> raw;
  double center = 0.0;

  if (const auto* urn = std::get_if<UrnModel>(&cfg.model)) {
    const LimitPrediction pred = classify(urn->matrix);
    result.prediction = pred;
    if (cfg.forced_scaling) {
      result.scaling = *cfg.forced_scaling;
    } else if (regime_supported(pred.regime)) {
      result.scaling = pred.scaling;
    } else {
      throw Error(ErrorCode::Configuration, std::string("regime ") + to_string(pred.regime) +
                                                " has no scaling; force exponents to simulate it");
    }
    // Without an attracting zero the statistic is centred at the initial fraction.
    center = pred.has_zero ? pred.p : urn->W0 / (urn->W0 + urn->B0);
    if (!cfg.forced_scaling) result.predicted_variance = pred.predicted_variance;
    if (pred.regime == Regime::AsPowerLaw && urn->matrix == kJansonMatrix && urn->B0 > 3.0 && !cfg.forced_scaling) {
      // The known limit is for n^(2/5)(p - X_n); the statistic here is oriented as X_n - p.
      result.predicted_mean = -predicted_scaled_mean(urn->W0, urn->B0);
    }
    raw = simulate_urn_checkpoints(*urn, at, cfg.paths, cfg.master_seed, cfg.threads, cfg.kernel);
  } else {
    const auto& syn = std::get<SyntheticModel>(cfg.model);
    result.scaling = cfg.forced_scaling.value_or(Scaling{0.0, 0.0});
    if (!cfg.forced_scaling) result.predicted_variance = syn.process.limit_variance();
    raw = simulate_synthetic_checkpoints(syn.process, cfg.start_index(), at, cfg.paths, cfg.master_seed,
                                         cfg.threads, cfg.kernel);
  }

  for (std::size_t i = 0; i < at.size(); ++i) {
    const double factor = scale_factor(at[i], result.scaling, cfg.convention);
    for (double& v : raw[i]) v = factor * (v - center);
    result.checkpoints.push_back({at[i], summarize(raw[i])});
  }
  result.values = std::move(raw.back());
  result.summary = result.checkpoints.back().summary;

  KsVerdict ks;
  bool have_reference = false;
  if (result.predicted_variance && *result.predicted_variance > 0.0) {
    ks.reference = "predicted_normal";
    ks.ref_mean = 0.0;
    ks.ref_variance = *result.predicted_variance;
    have_reference = true;
  } else if (result.summary.count >= 2 && result.summary.variance > 0.0) {
    ks.reference = "fitted_normal";
    ks.ref_mean = result.summary.mean;
    ks.ref_variance = result.summary.variance;
    have_reference = true;
  }
  if (have_reference) {
    ks.statistic = ks_statistic(result.values, [&](double z) { return normal_cdf(z, ks.ref_mean, ks.ref_variance); });
    ks.critical_5 = ks_critical(kKsCoefficient5, result.values.size());
    ks.critical_1 = ks_critical(kKsCoefficient1, result.values.size());
    ks.reject_5 = ks.statistic > ks.critical_5;
    ks.reject_1 = ks.statistic > ks.critical_1;
    result.ks = ks;
  }
  return result;
}

std::vector<PathPoint> trace_urn_path(const UrnModel& model, std::span<const std::uint64_t> at,
                                      std::uint64_t master_seed, std::uint64_t path_index) {
  model.matrix.require_sa();
  if (!std::is_sorted(at.begin(), at.end()))
    throw Error(ErrorCode::Configuration, "checkpoints must be increasing");
  Xoshiro256pp rng(master_seed, path_index);
  UrnState s = UrnState::initial(model.W0, model.B0);
  double prev = s.X();
  std::vector<PathPoint> out;
  out.reserve(at.size());
  for (std::uint64_t target : at) {
    while (s.n < target) {
      prev = s.X();
      s = urn_step(s, model.matrix, uniform_from_bits(rng()));
    }
    out.push_back({s.n, s.X(), s.n == 0 ? s.X() : prev, s.T(), s.W_star});
  }
  return out;
}

std::vector<double> successive_deviations(std::span<const Checkpoint> path, double p, double alpha) {
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const double s0 = std::pow(static_cast<double>(path[k].n), alpha) * (path[k].X - p);
    const double s1 = std::pow(static_cast<double>(path[k + 1].n), alpha) * (path[k + 1].X - p);
    out.push_back(std::abs(s1 - s0));
  }
  return out;
}

double as_convergence_check(std::span<const Checkpoint> path, double p, double alpha) {
  if (path.size() < 4) throw Error(ErrorCode::InsufficientData, "as_convergence_check needs >= 4 checkpoints");
  const std::vector<double> dev = successive_deviations(path.subspan(path.size() / 2), p, alpha);
  return *std::max_element(dev.begin(), dev.end());
}

RateCheck gamma_hat_rate_check(std::span<const PathPoint> path, const ReplacementMatrix& m,
                               const LimitPrediction& prediction) {
  if (!prediction.has_zero)
    throw Error(ErrorCode::NoStableZero, "gamma_hat_rate_check needs a prediction with an interior zero");
  const DriftPoly f = drift_from_matrix(m);
  const bool critical = prediction.regime == Regime::CltSqrtNOverLog;
  RateCheck out;
  if (critical) out.max_log_gap = 0.0;
  for (const PathPoint& pt : path) {
    if (pt.n < 2) continue;
    const double gh = gamma_hat_n(f, prediction.p, pt.n, pt.T, pt.X_prev);
    const double L = std::abs(gh - prediction.gamma_hat) /
                     (std::abs(pt.X - prediction.p) + 1.0 / static_cast<double>(pt.n));
    out.sup_L = std::max(out.sup_L, L);
    if (critical)
      out.max_log_gap = std::max(*out.max_log_gap, std::abs(gh - 0.5) * std::log(static_cast<double>(pt.n)));
  }
  return out;
}

}  // namespace urnsa
