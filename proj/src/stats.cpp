#include "urnsa/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "urnsa/error.hpp"

namespace urnsa {

namespace {

struct CentralSums {
  double mean = 0.0;
  double m2 = 0.0;
  double m3 = 0.0;
};

// Two passes in index order keep the result independent of who produced the values.
CentralSums central_sums(std::span<const double> values) {
  const auto n = static_cast<double>(values.size());
  CentralSums s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / n;
  for (double v : values) {
    const double d = v - s.mean;
    s.m2 += d * d;
    s.m3 += d * d * d;
  }
  return s;
}

}  // namespace

Moments sample_moments(std::span<const double> values) {
  if (values.size() < 3)
    throw Error(ErrorCode::InsufficientData, "sample_moments needs at least three values");
  const CentralSums s = central_sums(values);
  if (!(s.m2 > 0.0))
    throw Error(ErrorCode::DegenerateVariance, "sample_moments: zero spread, skewness undefined");
  const auto n = static_cast<double>(values.size());
  Moments m;
  m.mean = s.mean;
  m.variance = s.m2 / (n - 1.0);
  const double b2 = s.m2 / n;
  m.skewness = (s.m3 / n) / std::pow(b2, 1.5);
  return m;
}

Summary summarize(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::InsufficientData, "summarize needs a non-empty sample");
  Summary out;
  out.count = values.size();
  const CentralSums s = central_sums(values);
  out.mean = s.mean;
  if (values.size() >= 2) out.variance = s.m2 / (static_cast<double>(values.size()) - 1.0);
  if (values.size() >= 3 && s.m2 > 0.0) {
    const auto n = static_cast<double>(values.size());
    out.skewness = (s.m3 / n) / std::pow(s.m2 / n, 1.5);
  }
  return out;
}

double ks_statistic(std::span<const double> values, const std::function<double(double)>& cdf) {
  if (values.empty()) throw Error(ErrorCode::InsufficientData, "ks_statistic needs a non-empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    const double above = static_cast<double>(i + 1) / n - f;
    const double below = f - static_cast<double>(i) / n;
    d = std::max({d, above, below});
  }
  return d;
}

double ks_critical(double coefficient, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InsufficientData, "ks_critical needs N >= 1");
  return coefficient / std::sqrt(static_cast<double>(n));
}

}  // namespace urnsa
