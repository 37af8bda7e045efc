#include "urnsa/polya_urn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "urnsa/error.hpp"

namespace urnsa {

double ReplacementMatrix::max_row_sum() const noexcept {
  return std::max(white_row_sum(), black_row_sum());
}

double ReplacementMatrix::min_row_sum() const noexcept {
  return std::min(white_row_sum(), black_row_sum());
}

void ReplacementMatrix::require_sa() const {
  if (!nonnegative() || !std::isfinite(a + b + c + d))
    throw Error(ErrorCode::NotStochasticApprox, "replacement matrix entries must be finite and nonnegative");
  if (!(min_row_sum() > 0.0))
    throw Error(ErrorCode::NotStochasticApprox,
                "replacement matrix needs min{a+b, c+d} > 0 for the white fraction to be a stochastic "
                "approximation");
}

UrnState UrnState::initial(double W0, double B0) {
  if (!(W0 > 0.0) || !(B0 > 0.0) || !std::isfinite(W0 + B0))
    throw Error(ErrorCode::InvalidState, "initial urn needs W0 > 0 and B0 > 0");
  return UrnState{W0, B0, 0, 0};
}

DriftPoly drift_from_matrix(const ReplacementMatrix& m) {
  m.require_sa();
  return DriftPoly(m.alpha(), m.beta(), m.c);
}

ErrorPoly error_poly_from_matrix(const ReplacementMatrix& m) {
  m.require_sa();
  return ErrorPoly{m.a - m.c, m.alpha()};
}

UrnState urn_step(const UrnState& s, const ReplacementMatrix& m, double u) {
  const double T = s.T();
  if (!(T > 0.0)) throw Error(ErrorCode::InvalidState, "urn_step: total count must be positive");
  if (!(u >= 0.0 && u < 1.0)) throw Error(ErrorCode::DomainViolation, "urn_step: u must lie in [0,1)");
  UrnState next = s;
  next.n = s.n + 1;
  if (u * T < s.W) {
    next.W += m.a;
    next.B += m.b;
    next.W_star += 1;
  } else {
    next.W += m.c;
    next.B += m.d;
  }
  return next;
}

double urn_noise(const UrnState& before, const UrnState& after, const DriftPoly& f) noexcept {
  // T_{n+1}(X_{n+1} - X_n) written as W_{n+1} - T_{n+1} X_n keeps the exact count in play.
  const double x0 = before.X();
  return after.W - after.T() * x0 - f(x0);
}

double gamma_limit(const ReplacementMatrix& m, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::DomainViolation, "gamma_limit: p outside [0,1]");
  m.require_sa();
  return 1.0 / (m.white_row_sum() * p + m.black_row_sum() * (1.0 - p));
}

GammaHat gamma_hat(const ReplacementMatrix& m) {
  const DriftPoly f = drift_from_matrix(m);
  if (f.identically_zero())
    throw Error(ErrorCode::NoStableZero, "gamma_hat: drift vanishes identically");
  for (const DriftZero& z : stable_zeros(f)) {
    if (!z.interior) continue;
    if (z.stability == Stability::DoubleZero)
      throw Error(ErrorCode::RegimeMismatch, "gamma_hat: interior zero is a double zero (h(p) = 0)");
    if (z.stability != Stability::Stable) continue;
    GammaHat g;
    g.p = z.value;
    g.gamma = gamma_limit(m, g.p);
    g.h_p = -f.derivative(g.p);
    g.gamma_hat = g.gamma * g.h_p;
    return g;
  }
  throw Error(ErrorCode::NoStableZero, "gamma_hat: drift has no stable zero in (0,1)");
}

double gamma_hat_n(const DriftPoly& f, double p, std::uint64_t n, double T_n, double X_prev) noexcept {
  return static_cast<double>(n) / T_n * f.h(X_prev, p);
}

GammaDeviation gamma_deviation(const UrnState& s, const ReplacementMatrix& m, double T0, double p,
                               double gamma) {
  if (s.n < 1) throw Error(ErrorCode::InvalidState, "gamma_deviation needs n >= 1");
  const double n = static_cast<double>(s.n);
  const double alpha = m.alpha();
  const double cd = m.black_row_sum();
  const double ws = static_cast<double>(s.W_star) / n;
  GammaDeviation dev;
  dev.direct = n / s.T() - gamma;
  dev.identity = (alpha * (ws - p) - T0 / n) / ((cd - alpha * p) * (T0 / n + cd - alpha * ws));
  return dev;
}

std::uint64_t max_exact_horizon(const ReplacementMatrix& m, double T0) noexcept {
  constexpr double kExact = 9007199254740992.0;  // 2^53
  const double grow = m.max_row_sum();
  if (!(grow > 0.0)) return std::numeric_limits<std::uint64_t>::max();
  const double room = std::floor((kExact - T0) / grow);
  if (room <= 0.0) return 0;
  return static_cast<std::uint64_t>(room);
}

}  // namespace urnsa
