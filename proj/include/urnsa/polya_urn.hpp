#pragma once

// Two-colour generalized Polya urn with replacement matrix
//
//        W  B
//   W  ( a  b )
//   B  ( c  d )
//
// Drawing white returns the ball plus a white and b black; drawing black
// returns it plus c white and d black. The white fraction X_n = W_n/T_n is a
// stochastic approximation with gamma_{n+1} = 1/T_{n+1},
// f(x) = alpha x^2 + beta x + c, alpha = c+d-a-b, beta = a-2c-d, and
// conditional noise variance E(x) = x(1-x)(a-c+alpha x)^2.
//
// Counts are doubles. Integer entries stay exact while every count is below
// 2^53; max_exact_horizon() reports the longest run that respects this.

#include <cstdint>

#include "urnsa/drift_poly.hpp"

namespace urnsa {

struct ReplacementMatrix {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;

  double alpha() const noexcept { return c + d - a - b; }
  double beta() const noexcept { return a - 2.0 * c - d; }
  double white_row_sum() const noexcept { return a + b; }
  double black_row_sum() const noexcept { return c + d; }
  double max_row_sum() const noexcept;
  double min_row_sum() const noexcept;

  bool nonnegative() const noexcept { return a >= 0 && b >= 0 && c >= 0 && d >= 0; }
  bool sa_eligible() const noexcept { return nonnegative() && min_row_sum() > 0; }
  bool singular() const noexcept { return a * d == b * c; }

  ReplacementMatrix scaled(double s) const noexcept { return {a * s, b * s, c * s, d * s}; }

  /// Throws Error(NotStochasticApprox) unless nonnegative with both row sums positive.
  void require_sa() const;

  friend bool operator==(const ReplacementMatrix&, const ReplacementMatrix&) = default;
};

struct UrnState {
  double W = 1.0;
  double B = 1.0;
  std::uint64_t n = 0;
  std::uint64_t W_star = 0;  // white draws so far

  double T() const noexcept { return W + B; }
  double X() const noexcept { return W / (W + B); }

  /// W0 > 0 and B0 > 0, no draws yet.
  static UrnState initial(double W0, double B0);
};

/// E(x) = x (1-x) (a - c + alpha x)^2.
struct ErrorPoly {
  double a_minus_c = 0.0;
  double alpha = 0.0;

  double operator()(double x) const noexcept {
    const double k = a_minus_c + alpha * x;
    return x * (1.0 - x) * k * k;
  }
};

DriftPoly drift_from_matrix(const ReplacementMatrix& m);
ErrorPoly error_poly_from_matrix(const ReplacementMatrix& m);

/// White iff u * T < W. Throws on T <= 0 or u outside [0,1).
UrnState urn_step(const UrnState& s, const ReplacementMatrix& m, double u);

/// T_{n+1}(X_{n+1} - X_n) - f(X_n).
double urn_noise(const UrnState& before, const UrnState& after, const DriftPoly& f) noexcept;

/// 1 / ((a+b) p + (c+d)(1-p)).
double gamma_limit(const ReplacementMatrix& m, double p);

struct GammaHat {
  double p = 0.0;
  double gamma = 0.0;
  double h_p = 0.0;
  double gamma_hat = 0.0;
};

/// Stable interior zero p, gamma, h(p) = -f'(p) and gamma_hat = gamma h(p).
/// Throws Error(NoStableZero) if there is no interior stable zero and
/// Error(RegimeMismatch) if that zero is a double zero.
GammaHat gamma_hat(const ReplacementMatrix& m);

/// n gamma_n h(X_{n-1}) for an urn path: n / T_n * h(X_{n-1}).
double gamma_hat_n(const DriftPoly& f, double p, std::uint64_t n, double T_n, double X_prev) noexcept;

struct GammaDeviation {
  double direct = 0.0;    // n/T_n - gamma
  double identity = 0.0;  // closed form through W*_n
};

/// Requires s.n >= 1. T0 is the initial total count of the path.
GammaDeviation gamma_deviation(const UrnState& s, const ReplacementMatrix& m, double T0, double p,
                               double gamma);

/// Longest horizon for which all counts stay below 2^53 from total T0.
std::uint64_t max_exact_horizon(const ReplacementMatrix& m, double T0) noexcept;

}  // namespace urnsa
