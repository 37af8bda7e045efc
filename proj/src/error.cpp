#include "urnsa/error.hpp"

namespace urnsa {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DomainViolation: return "domain-violation";
    case ErrorCode::NotStochasticApprox: return "not-stochastic-approximation";
    case ErrorCode::InvalidState: return "invalid-state";
    case ErrorCode::NoStableZero: return "no-stable-zero";
    case ErrorCode::RegimeMismatch: return "regime-mismatch";
    case ErrorCode::DegenerateVariance: return "degenerate-variance";
    case ErrorCode::UndefinedMean: return "undefined-mean";
    case ErrorCode::InsufficientData: return "insufficient-data";
    case ErrorCode::Configuration: return "configuration";
    case ErrorCode::Io: return "io";
    case ErrorCode::ZeroDrift: return "zero-drift";
  }
  return "unknown";
}

}  // namespace urnsa
