#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "urnsa/ensemble.hpp"

namespace urnsa {

enum class Suite { Quick, Full };

const char* to_string(Suite s) noexcept;
Suite suite_from_string(const std::string& s);

struct AcceptanceOptions {
  unsigned threads = 1;
  KernelKind kernel = KernelKind::Auto;
  std::uint64_t seed = kDefaultSeed;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string measured;  // human-readable measured values and targets
};

/// Quick runs the invariant and determinism criteria (7, 9) at reduced size;
/// Full runs criteria 1-9 at the stated ensemble sizes. When `log` is given,
/// one line per criterion is written as soon as it finishes.
std::vector<CriterionResult> run_acceptance(Suite suite, const AcceptanceOptions& opts, std::ostream* log = nullptr);

/// `PASS  3 critical-clt  var=...` style line, without trailing newline.
std::string format_result(const CriterionResult& r);

}  // namespace urnsa
