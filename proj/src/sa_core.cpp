#include "urnsa/sa_core.hpp"

#include <cmath>
#include <sstream>

#include "urnsa/error.hpp"

namespace urnsa {

bool SAPath::consistent() const noexcept {
  if (values.empty()) return steps.empty() && noises.empty();
  if (steps.size() + 1 != values.size() || noises.size() + 1 != values.size()) return false;
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0)) return false;
  }
  return true;
}

const char* to_string(StepFamily family) noexcept {
  return family == StepFamily::N ? "n" : "nlogn";
}

StepFamily step_family_from_string(const std::string& name) {
  if (name == "n") return StepFamily::N;
  if (name == "nlogn" || name == "n_log_n") return StepFamily::NLogN;
  throw Error(ErrorCode::Configuration, "unknown step family '" + name + "' (expected n or nlogn)");
}

double step_divisor(StepFamily family, std::uint64_t n) noexcept {
  const auto dn = static_cast<double>(n);
  return family == StepFamily::N ? dn : dn * std::log(dn);
}

std::uint64_t first_contracting_index(StepFamily family, double gamma) noexcept {
  std::uint64_t n = 1;
  while (!(step_divisor(family, n) > gamma)) ++n;
  return n;
}

void SyntheticProcess::validate() const {
  if (!(gamma > 0.0)) throw Error(ErrorCode::Configuration, "synthetic process needs Gamma > 0");
  if (!(sigma2 > 0.0)) throw Error(ErrorCode::Configuration, "synthetic process needs sigma^2 > 0");
  if (!(noise_bound >= sigma2))
    throw Error(ErrorCode::Configuration, "synthetic process needs noise bound C_V >= sigma^2");
  if (!std::isfinite(z0)) throw Error(ErrorCode::Configuration, "synthetic process needs finite z0");
}

double sa_step(double x, double gamma, double f_val, double u) {
  if (!(x >= 0.0 && x <= 1.0)) throw Error(ErrorCode::DomainViolation, "sa_step: x outside [0,1]");
  if (!(gamma > 0.0)) throw Error(ErrorCode::DomainViolation, "sa_step: step length must be positive");
  const double next = x + gamma * (f_val + u);
  if (next < -kDomainTolerance || next > 1.0 + kDomainTolerance || std::isnan(next)) {
    std::ostringstream os;
    os << "sa_step: result " << next << " leaves [0,1]";
    throw Error(ErrorCode::DomainViolation, os.str());
  }
  return next;
}

double q_step(double q, double gamma_hat, double u_hat, std::uint64_t n) noexcept {
  const double n1 = static_cast<double>(n) + 1.0;
  return (1.0 - gamma_hat / n1) * q + u_hat / n1;
}

double synthetic_step(double z, double gamma_n, double v, double g) noexcept {
  return (1.0 - gamma_n / g) * z + v / std::sqrt(g);
}

double weight(std::uint64_t n, double x, double y) {
  if (n < 1) throw Error(ErrorCode::DomainViolation, "weight: n must be at least 1");
  const double n1 = static_cast<double>(n) + 1.0;
  double w = x == 0.0 ? 1.0 : std::pow(n1, x);
  if (y != 0.0) w *= std::pow(std::log(n1), y);
  return w;
}

}  // namespace urnsa
