#pragma once

// One-dimensional stochastic approximation recursions:
//   X_{n+1} = X_n + gamma_{n+1} (f(X_n) + U_{n+1})
// the centered form for Q_n = X_n - p, and the synthetic linear process
//   Z_{n+1} = (1 - Gamma_{n+1}/g_n) Z_n + V_{n+1}/sqrt(g_n)
// used to exercise the normal limit N(0, sigma^2 / (2 Gamma)) directly.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace urnsa {

class DriftPoly;

/// Bounds of the defining conditions: c_l/n <= gamma_n <= c_u/n, |U_n| <= K_u,
/// |f(X_n)| <= K_f and |E_n(gamma_{n+1} U_{n+1})| <= K_e / n^2.
struct SAConstants {
  double c_l = 1.0;
  double c_u = 1.0;
  double K_u = 1.0;
  double K_f = 1.0;
  double K_e = 1.0;

  bool valid() const noexcept {
    return c_l > 0 && c_u > 0 && K_u > 0 && K_f > 0 && K_e > 0 && c_l <= c_u;
  }
};

/// A recorded trajectory. steps[k] and noises[k] produce values[k+1] from values[k].
struct SAPath {
  std::vector<double> values;
  std::vector<double> steps;
  std::vector<double> noises;
  const DriftPoly* drift = nullptr;

  /// Checks the length relation and that every value lies in [0,1].
  bool consistent() const noexcept;
};

/// Selects the divisor sequence g_n of the synthetic process.
enum class StepFamily { N, NLogN };

const char* to_string(StepFamily family) noexcept;
StepFamily step_family_from_string(const std::string& name);

/// g_n for the given family (n for N, n ln n for NLogN).
double step_divisor(StepFamily family, std::uint64_t n) noexcept;

/// First index n >= 1 with g_n > gamma, so that 1 - gamma/g_n lies in (0,1).
std::uint64_t first_contracting_index(StepFamily family, double gamma) noexcept;

struct SyntheticProcess {
  double gamma = 1.0;        // Gamma > 0
  double sigma2 = 1.0;       // sigma^2 > 0
  double noise_bound = 1.0;  // C_V >= sigma^2
  StepFamily step_family = StepFamily::N;
  double z0 = 0.0;

  /// Throws Error(Configuration) when an invariant is violated.
  void validate() const;

  double limit_variance() const noexcept { return sigma2 / (2.0 * gamma); }
};

/// Absolute slack allowed when checking that sa_step stays inside [0,1].
inline constexpr double kDomainTolerance = 1e-12;

/// x + gamma (f_val + u). Throws Error(DomainViolation) when the result leaves
/// [0,1] by more than kDomainTolerance, or when x or gamma are out of domain.
double sa_step(double x, double gamma, double f_val, double u);

/// (1 - gamma_hat/(n+1)) q + u_hat/(n+1).
double q_step(double q, double gamma_hat, double u_hat, std::uint64_t n) noexcept;

/// (1 - gamma_n/g) z + v/sqrt(g).
double synthetic_step(double z, double gamma_n, double v, double g) noexcept;

/// (n+1)^x [ln(n+1)]^y for n >= 1.
double weight(std::uint64_t n, double x, double y);

}  // namespace urnsa
