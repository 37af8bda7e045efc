#pragma once

#include <vector>

namespace urnsa {

enum class Stability { Stable, Unstable, DoubleZero };

const char* to_string(Stability s) noexcept;

struct DriftZero {
  double value = 0.0;
  Stability stability = Stability::Stable;
  bool interior = false;  // strictly inside (0,1)
  bool in_unit_interval = false;
};

/// f(x) = quad x^2 + lin x + constant.
class DriftPoly {
 public:
  DriftPoly() = default;
  DriftPoly(double quad, double lin, double constant)
      : quad_(quad), lin_(lin), constant_(constant) {}

  double quad() const noexcept { return quad_; }
  double lin() const noexcept { return lin_; }
  double constant() const noexcept { return constant_; }

  double operator()(double x) const noexcept { return (quad_ * x + lin_) * x + constant_; }
  double derivative(double x) const noexcept { return 2.0 * quad_ * x + lin_; }

  bool identically_zero() const noexcept {
    return quad_ == 0.0 && lin_ == 0.0 && constant_ == 0.0;
  }

  /// h(x) = -f(x)/(x - p) for a zero p of f, in the factored form
  /// -(quad (x + p) + lin), so h(p) = -f'(p) with no cancellation.
  double h(double x, double p) const noexcept { return -(quad_ * (x + p) + lin_); }

  friend bool operator==(const DriftPoly&, const DriftPoly&) = default;

 private:
  double quad_ = 0.0;
  double lin_ = 0.0;
  double constant_ = 0.0;
};

/// |f'(r)| at or below this is a double zero.
inline constexpr double kDoubleZeroTolerance = 1e-12;

/// Real zeros of f in ascending order, each tagged by the sign of f'.
/// Throws Error(ZeroDrift) when f is identically zero.
std::vector<DriftZero> stable_zeros(const DriftPoly& f);

}  // namespace urnsa
