#pragma once

#include <stdexcept>
#include <string>

namespace urnsa {

enum class ErrorCode {
  DomainViolation,   // value left [0,1] or argument outside its domain
  NotStochasticApprox,
  InvalidState,
  NoStableZero,
  RegimeMismatch,
  DegenerateVariance,
  UndefinedMean,
  InsufficientData,
  Configuration,
  Io,
  ZeroDrift,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace urnsa
