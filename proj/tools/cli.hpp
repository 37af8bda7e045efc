#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "urnsa/polya_urn.hpp"

namespace urnsa::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kIo = 2, kAcceptanceFailed = 3 };

/// Relative output paths are placed under this directory when it is set.
inline constexpr const char* kOutputDirEnv = "URNSA_OUTPUT_DIR";

/// A decimal (`0.25`, `1e-3`) or an exact ratio of integers (`1/3`).
double parse_number(std::string_view text);

/// Row-major `a,b,c,d`; each entry goes through parse_number.
ReplacementMatrix parse_matrix(std::string_view text);

/// Runs one command line. Never calls exit(); returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace urnsa::cli
