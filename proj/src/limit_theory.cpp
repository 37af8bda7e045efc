#include "urnsa/limit_theory.hpp"

#include <cmath>

#include "urnsa/error.hpp"
#include "urnsa/special.hpp"

namespace urnsa {

const char* to_string(Regime r) noexcept {
  switch (r) {
    case Regime::CltSqrtN: return "CLT_SQRT_N";
    case Regime::CltSqrtNOverLog: return "CLT_SQRT_N_OVER_LOG";
    case Regime::AsPowerLaw: return "AS_POWER_LAW";
    case Regime::SingularMonotone: return "SINGULAR_MONOTONE";
    case Regime::DoubleZero: return "DOUBLE_ZERO";
    case Regime::ZeroDriftBeta: return "ZERO_DRIFT_BETA";
    case Regime::NotApplicable: return "NOT_APPLICABLE";
  }
  return "UNKNOWN";
}

bool regime_supported(Regime r) noexcept {
  return r == Regime::CltSqrtN || r == Regime::CltSqrtNOverLog || r == Regime::AsPowerLaw;
}

namespace {

void fill_at_zero(LimitPrediction& pred, const ReplacementMatrix& m, const DriftPoly& f,
                  const ErrorPoly& err, double p) {
  pred.has_zero = true;
  pred.p = p;
  pred.gamma = gamma_limit(m, p);
  pred.h_p = -f.derivative(p);
  pred.gamma_hat = pred.gamma * pred.h_p;
  pred.sigma2 = pred.gamma * pred.gamma * err(p);
}

}  // namespace

LimitPrediction classify(const ReplacementMatrix& m) {
  m.require_sa();
  const DriftPoly f = drift_from_matrix(m);
  const ErrorPoly err = error_poly_from_matrix(m);
  LimitPrediction pred;

  if (f.identically_zero()) {
    pred.regime = Regime::ZeroDriftBeta;
    return pred;
  }

  if (m.singular()) {
    // (a, b; lambda a, lambda b): the white fraction moves monotonically to a/(a+b).
    const double p = m.a / (m.a + m.b);
    if (p > 0.0 && p < 1.0) {
      fill_at_zero(pred, m, f, err, p);
      pred.regime = Regime::SingularMonotone;
    } else {
      pred.regime = Regime::NotApplicable;
    }
    return pred;
  }

  const std::vector<DriftZero> zeros = stable_zeros(f);
  for (const DriftZero& z : zeros) {
    if (z.in_unit_interval && z.stability == Stability::DoubleZero) {
      fill_at_zero(pred, m, f, err, z.value);
      pred.h_p = 0.0;
      pred.gamma_hat = 0.0;
      pred.regime = Regime::DoubleZero;
      return pred;
    }
  }

  const DriftZero* stable = nullptr;
  for (const DriftZero& z : zeros) {
    if (z.interior && z.stability == Stability::Stable) {
      stable = &z;
      break;
    }
  }
  if (stable == nullptr) {
    pred.regime = Regime::NotApplicable;
    return pred;
  }

  fill_at_zero(pred, m, f, err, stable->value);
  if (!(pred.sigma2 > 0.0)) {
    pred.regime = Regime::NotApplicable;
    return pred;
  }

  const double excess = pred.gamma_hat - 0.5;
  if (std::abs(excess) <= kCriticalTolerance) {
    pred.regime = Regime::CltSqrtNOverLog;
    pred.scaling = {0.5, -0.5};
    pred.predicted_variance = pred.sigma2;
  } else if (excess > 0.0) {
    pred.regime = Regime::CltSqrtN;
    pred.scaling = {0.5, 0.0};
    pred.predicted_variance = pred.sigma2 / (2.0 * excess);
  } else if (pred.gamma_hat > 0.0) {
    pred.regime = Regime::AsPowerLaw;
    pred.scaling = {pred.gamma_hat, 0.0};
    pred.as_exponent = pred.gamma_hat;
  } else {
    pred.regime = Regime::NotApplicable;
  }
  return pred;
}

double variance_alpha0(const ReplacementMatrix& m) {
  m.require_sa();
  const double a = m.a, b = m.b, c = m.c, d = m.d;
  const double scale = a + b + c + d;
  if (std::abs((a + b) - (c + d)) > 1e-12 * scale)
    throw Error(ErrorCode::RegimeMismatch, "variance_alpha0 needs a+b = c+d");
  if (!(b > 0.0) || !(c > 0.0))
    throw Error(ErrorCode::NoStableZero, "variance_alpha0 needs b > 0 and c > 0");
  if (a == c)
    throw Error(ErrorCode::DegenerateVariance, "variance_alpha0: a = c gives vanishing noise");
  const double critical = b + 2.0 * c;
  if (std::abs(a - critical) <= 1e-12 * scale) return b * c / (4.0 * (b + c) * (b + c));
  if (a > critical)
    throw Error(ErrorCode::RegimeMismatch, "variance_alpha0: a > b+2c means gamma_hat < 1/2, no CLT");
  const double amc = a - c;
  return b * c * amc * amc / ((a + b) * (c + b) * (c + b) * (critical - a));
}

double product_P_alpha(std::uint64_t m, std::uint64_t n, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw Error(ErrorCode::DomainViolation, "product_P_alpha needs alpha in (0,1)");
  if (m < 1) throw Error(ErrorCode::DomainViolation, "product_P_alpha needs m >= 1");
  double prod = 1.0;
  for (std::uint64_t k = m; k <= n; ++k) prod *= 1.0 - alpha / static_cast<double>(k);
  return prod;
}

double chung_recursion(double b0, double A, double B, StepFamily family, std::uint64_t N) {
  if (!(A > 0.0)) throw Error(ErrorCode::DomainViolation, "chung_recursion needs A > 0");
  if (N < 1) throw Error(ErrorCode::DomainViolation, "chung_recursion needs N >= 1");
  double b = b0;
  for (std::uint64_t k = first_contracting_index(family, A); k < N; ++k) {
    const double g = step_divisor(family, k);
    b = (1.0 - A / g) * b + B / g;
  }
  return b;
}

double janson_mean(double W0, double B0) {
  if (!(W0 > 0.0)) throw Error(ErrorCode::UndefinedMean, "janson_mean needs W0 > 0");
  if (!(B0 > 3.0)) throw Error(ErrorCode::UndefinedMean, "janson_mean: E|W| is infinite unless B0 > 3");
  return (W0 * gamma_fn((B0 - 3.0) / 5.0) - 5.0 * gamma_fn((B0 + 2.0) / 5.0)) / gamma_fn(B0 / 5.0);
}

double predicted_scaled_mean(double W0, double B0) {
  return janson_mean(W0, B0) / (3.0 * std::pow(2.0, 1.6));
}

}  // namespace urnsa
