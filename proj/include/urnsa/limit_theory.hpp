#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "urnsa/polya_urn.hpp"
#include "urnsa/sa_core.hpp"

namespace urnsa {

enum class Regime {
  CltSqrtN,          // gamma_hat > 1/2: sqrt(n)(X_n - p) -> N(0, sigma^2 / (2 gamma_hat - 1))
  CltSqrtNOverLog,   // gamma_hat = 1/2: sqrt(n / ln n)(X_n - p) -> N(0, sigma^2)
  AsPowerLaw,        // 0 < gamma_hat < 1/2: n^gamma_hat (X_n - p) converges a.s.
  SingularMonotone,  // ad = bc: gamma_hat = 1, sigma^2 = 0, monotone paths
  DoubleZero,        // h(p) = 0
  ZeroDriftBeta,     // f == 0, multiple of the identity
  NotApplicable,
};

const char* to_string(Regime r) noexcept;

/// Whether an ensemble can build a scaled statistic without forced exponents.
bool regime_supported(Regime r) noexcept;

struct Scaling {
  double x = 0.0;
  double y = 0.0;
};

struct LimitPrediction {
  Regime regime = Regime::NotApplicable;
  double p = 0.0;
  double gamma = 0.0;
  double h_p = 0.0;
  double gamma_hat = 0.0;
  double sigma2 = 0.0;
  Scaling scaling;
  std::optional<double> predicted_variance;
  std::optional<double> as_exponent;
  bool has_zero = false;  // p, gamma, h_p, gamma_hat, sigma2 are meaningful
};

/// |gamma_hat - 1/2| at or below this counts as the critical case.
inline constexpr double kCriticalTolerance = 1e-12;

/// Analytic limit prediction for the white fraction of an urn.
/// Throws Error(NotStochasticApprox) for ineligible matrices.
LimitPrediction classify(const ReplacementMatrix& m);

/// Closed-form limiting variance for a+b = c+d (deterministic steps):
///   a < b+2c: bc(a-c)^2 / ((a+b)(c+b)^2(b+2c-a))
///   a = b+2c: bc / (4(b+c)^2)
double variance_alpha0(const ReplacementMatrix& m);

/// prod_{k=m}^{n} (1 - alpha/k); empty product is 1.
double product_P_alpha(std::uint64_t m, std::uint64_t n, double alpha);

/// Iterates b_{k+1} = (1 - A/g_k) b_k + B/g_k from the first k with g_k > A
/// (where b_k = b0) and returns b_N.
double chung_recursion(double b0, double A, double B, StepFamily family, std::uint64_t N);

/// Mean of Janson's limit W for the urn (3,0;2,5):
///   (W0 Gamma((B0-3)/5) - 5 Gamma((B0+2)/5)) / Gamma(B0/5), finite iff B0 > 3.
double janson_mean(double W0, double B0);

/// janson_mean / (3 * 2^(8/5)), the converted mean of the a.s. limit of
/// n^(2/5)(1/2 - Z_n) for the (3,0;2,5) urn. Simulated means at n = 1e6 have
/// the opposite sign; the README has the numbers.
double predicted_scaled_mean(double W0, double B0);

/// The matrix for which janson_mean applies.
inline constexpr ReplacementMatrix kJansonMatrix{3.0, 0.0, 2.0, 5.0};

}  // namespace urnsa
