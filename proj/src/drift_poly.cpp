#include "urnsa/drift_poly.hpp"

#include <algorithm>
#include <cmath>

#include "urnsa/error.hpp"

namespace urnsa {

const char* to_string(Stability s) noexcept {
  switch (s) {
    case Stability::Stable: return "stable";
    case Stability::Unstable: return "unstable";
    case Stability::DoubleZero: return "double";
  }
  return "unknown";
}

namespace {

DriftZero tag_zero(const DriftPoly& f, double r) {
  DriftZero z;
  z.value = r;
  const double slope = f.derivative(r);
  if (std::abs(slope) <= kDoubleZeroTolerance) {
    z.stability = Stability::DoubleZero;
  } else {
    z.stability = slope < 0.0 ? Stability::Stable : Stability::Unstable;
  }
  z.interior = r > 0.0 && r < 1.0;
  z.in_unit_interval = r >= 0.0 && r <= 1.0;
  return z;
}

}  // namespace

std::vector<DriftZero> stable_zeros(const DriftPoly& f) {
  if (f.identically_zero()) throw Error(ErrorCode::ZeroDrift, "drift is identically zero");

  const double a = f.quad();
  const double b = f.lin();
  const double c = f.constant();
  std::vector<DriftZero> out;

  if (a == 0.0) {
    if (b != 0.0) out.push_back(tag_zero(f, -c / b));
    return out;
  }

  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return out;
  if (disc == 0.0) {
    DriftZero z = tag_zero(f, -b / (2.0 * a));
    z.stability = Stability::DoubleZero;
    out.push_back(z);
    return out;
  }
  // Cancellation-free pair: q = -(b + sgn(b) sqrt(disc)) / 2, roots q/a and c/q.
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (b + std::copysign(sq, b));
  double r1 = q / a;
  double r2 = q != 0.0 ? c / q : -b / a - r1;
  if (r1 > r2) std::swap(r1, r2);
  out.push_back(tag_zero(f, r1));
  out.push_back(tag_zero(f, r2));
  return out;
}

}  // namespace urnsa
