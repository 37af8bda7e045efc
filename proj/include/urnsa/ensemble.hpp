#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "urnsa/kernels.hpp"
#include "urnsa/limit_theory.hpp"
#include "urnsa/polya_urn.hpp"
#include "urnsa/sa_core.hpp"
#include "urnsa/stats.hpp"

namespace urnsa {

struct UrnModel {
  ReplacementMatrix matrix;
  double W0 = 1.0;
  double B0 = 1.0;
};

struct SyntheticModel {
  SyntheticProcess process;
};

/// Weight: (n+1)^x [ln(n+1)]^y. Plain: n^x [ln n]^y.
enum class ScalingConvention { Weight, Plain };

const char* to_string(ScalingConvention c) noexcept;

/// Geometric checkpoints start, start*f, start*f^2, ... below horizon, then horizon.
std::vector<std::uint64_t> geometric_checkpoints(std::uint64_t start, std::uint64_t horizon, double factor);

inline constexpr std::uint64_t kDefaultSeed = 20240229;

struct EnsembleConfig {
  std::variant<UrnModel, SyntheticModel> model;
  std::uint64_t horizon = 100000;
  std::uint64_t paths = 10000;
  std::uint64_t master_seed = kDefaultSeed;
  double checkpoint_factor = 2.0;
  std::optional<Scaling> forced_scaling;
  ScalingConvention convention = ScalingConvention::Weight;
  unsigned threads = 1;
  KernelKind kernel = KernelKind::Auto;

  /// Throws Error(Configuration) on inconsistent settings.
  void validate() const;

  /// Index of the first recorded value: 0 for urns, first_contracting_index for the synthetic process.
  std::uint64_t start_index() const;
  std::vector<std::uint64_t> checkpoints() const;
};

struct KsVerdict {
  std::string reference;  // "predicted_normal" or "fitted_normal"
  double ref_mean = 0.0;
  double ref_variance = 0.0;
  double statistic = 0.0;
  double critical_5 = 0.0;
  double critical_1 = 0.0;
  bool reject_5 = false;
  bool reject_1 = false;
};

struct CheckpointSummary {
  std::uint64_t n = 0;
  Summary summary;
};

struct EnsembleResult {
  std::vector<double> values;  // scaled statistic of each path at the horizon, by path index
  Summary summary;
  std::optional<LimitPrediction> prediction;  // urn models
  Scaling scaling;
  std::optional<double> predicted_variance;
  std::optional<double> predicted_mean;
  std::optional<KsVerdict> ks;
  std::vector<CheckpointSummary> checkpoints;
};

/// Scale factor of the statistic at index n (1 at n = 0).
double scale_factor(std::uint64_t n, Scaling s, ScalingConvention c);

EnsembleResult run_ensemble(const EnsembleConfig& cfg);

/// Raw white fractions of every path at every checkpoint, [checkpoint][path].
/// Exposed for path-wise checks; run_ensemble uses the same simulation.
std::vector<std::vector<double>> simulate_urn_checkpoints(const UrnModel& model, std::span<const std::uint64_t> at,
                                                          std::uint64_t paths, std::uint64_t master_seed,
                                                          unsigned threads, KernelKind kernel);

// ---------------------------------------------------------------------------
// Single paths and path-wise convergence witnesses.

struct PathPoint {
  std::uint64_t n = 0;
  double X = 0.0;
  double X_prev = 0.0;  // X_{n-1}; equals X at n = 0
  double T = 0.0;
  std::uint64_t W_star = 0;
};

/// Replays path `path_index` of an ensemble with the same seed draw by draw and
/// records it at the given checkpoints.
std::vector<PathPoint> trace_urn_path(const UrnModel& model, std::span<const std::uint64_t> at,
                                      std::uint64_t master_seed, std::uint64_t path_index = 0);

struct Checkpoint {
  std::uint64_t n = 0;
  double X = 0.0;
};

/// s_k = n_k^alpha (X_{n_k} - p); |s_{k+1} - s_k| for consecutive checkpoints.
std::vector<double> successive_deviations(std::span<const Checkpoint> path, double p, double alpha);

/// Largest |s_{k+1} - s_k| over the last half of the checkpoints. Needs >= 4 checkpoints.
double as_convergence_check(std::span<const Checkpoint> path, double p, double alpha);

struct RateCheck {
  double sup_L = 0.0;                     // sup |gamma_hat_n - gamma_hat| / (|X_n - p| + 1/n)
  std::optional<double> max_log_gap;      // max |gamma_hat_n - 1/2| ln n, when gamma_hat = 1/2
};

/// Evaluates the gamma_hat rate over the checkpoints with n >= 2.
RateCheck gamma_hat_rate_check(std::span<const PathPoint> path, const ReplacementMatrix& m,
                               const LimitPrediction& prediction);

}  // namespace urnsa
