#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>

namespace urnsa {

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // unbiased, divisor N-1
  double skewness = 0.0;  // m3 / m2^(3/2) with biased central moments
};

/// Mean, unbiased variance and skewness. Needs at least three values that are
/// not all equal; throws Error(InsufficientData) or Error(DegenerateVariance).
Moments sample_moments(std::span<const double> values);

struct Summary {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;
  std::optional<double> skewness;  // absent for fewer than 3 values or zero spread
};

/// Never throws on a non-empty sample; variance is 0 for a single value.
Summary summarize(std::span<const double> values);

/// sup_x |F_N(x) - F(x)| evaluated on the sorted sample.
double ks_statistic(std::span<const double> values, const std::function<double(double)>& cdf);

/// Asymptotic one-sample critical values c(alpha)/sqrt(N).
inline constexpr double kKsCoefficient5 = 1.358;
inline constexpr double kKsCoefficient1 = 1.628;
double ks_critical(double coefficient, std::size_t n);

}  // namespace urnsa
