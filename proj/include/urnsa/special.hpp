#pragma once

namespace urnsa {

/// Gamma(x) for x > 0. Throws Error(DomainViolation) otherwise.
double gamma_fn(double x);

/// Distribution function of N(mean, variance). Throws unless variance > 0.
double normal_cdf(double z, double mean, double variance);

/// Quantile of the standard normal, for probability in (0,1).
double normal_quantile(double prob);

}  // namespace urnsa
