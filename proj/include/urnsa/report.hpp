#pragma once

// Serialization of analyses and ensemble results. Output is a pure function
// of the inputs: no timestamps, thread counts or kernel names.

#include <iosfwd>
#include <span>
#include <string>

#include <json.hpp>

#include "urnsa/ensemble.hpp"
#include "urnsa/limit_theory.hpp"

namespace urnsa {

inline constexpr const char* kAnalysisSchema = "urnsa.analysis/1";
inline constexpr const char* kSummarySchema = "urnsa.summary/1";

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

nlohmann::json analysis_json(const ReplacementMatrix& m, double W0, double B0);
nlohmann::json summary_json(const EnsembleConfig& cfg, const EnsembleResult& result);

/// Header `path_id,z_value`, one LF-terminated row per path.
void write_values_csv(std::ostream& os, std::span<const double> values);

/// Header `n,X_n,scaled,gamma_hat_n,L_n`; undefined cells are left empty.
void write_path_csv(std::ostream& os, std::span<const PathPoint> path, const ReplacementMatrix& m,
                    const LimitPrediction& prediction, Scaling scaling, ScalingConvention convention);

}  // namespace urnsa
