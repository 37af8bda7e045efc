#include "urnsa/report.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include "urnsa/error.hpp"

namespace urnsa {

using nlohmann::json;

namespace {

json optional_number(const std::optional<double>& v) {
  if (v && std::isfinite(*v)) return *v;
  return nullptr;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json matrix_json(const ReplacementMatrix& m) {
  return {{"a", m.a}, {"b", m.b}, {"c", m.c}, {"d", m.d}};
}

json summary_stats(const Summary& s) {
  return {{"count", s.count},
          {"mean", number_or_null(s.mean)},
          {"variance", number_or_null(s.variance)},
          {"skewness", optional_number(s.skewness)}};
}

json prediction_json(const LimitPrediction& pred) {
  json j;
  j["regime"] = to_string(pred.regime);
  const auto field = [&](double v) { return pred.has_zero ? number_or_null(v) : json(nullptr); };
  j["p"] = field(pred.p);
  j["gamma"] = field(pred.gamma);
  j["h_p"] = field(pred.h_p);
  j["gamma_hat"] = field(pred.gamma_hat);
  j["sigma2"] = field(pred.sigma2);
  j["scaling"] = {{"x", pred.scaling.x}, {"y", pred.scaling.y}};
  j["predicted_variance"] = optional_number(pred.predicted_variance);
  j["as_exponent"] = optional_number(pred.as_exponent);
  return j;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

json analysis_json(const ReplacementMatrix& m, double W0, double B0) {
  const DriftPoly f = drift_from_matrix(m);
  const ErrorPoly err = error_poly_from_matrix(m);
  const LimitPrediction pred = classify(m);

  json j;
  j["schema"] = kAnalysisSchema;
  j["matrix"] = matrix_json(m);
  j["initial"] = {{"W0", W0}, {"B0", B0}};
  j["drift"] = {{"quad", f.quad()}, {"lin", f.lin()}, {"const", f.constant()}};
  j["error_poly"] = {{"a_minus_c", err.a_minus_c}, {"alpha", err.alpha}};
  json zeros = json::array();
  if (!f.identically_zero()) {
    for (const DriftZero& z : stable_zeros(f))
      zeros.push_back({{"value", z.value}, {"stability", to_string(z.stability)}, {"interior", z.interior}});
  }
  j["zeros"] = zeros;
  j["prediction"] = prediction_json(pred);
  j["error_at_p"] = pred.has_zero ? json(err(pred.p)) : json(nullptr);
  json mean = nullptr;
  if (pred.regime == Regime::AsPowerLaw && m == kJansonMatrix && B0 > 3.0 && W0 > 0.0)
    mean = predicted_scaled_mean(W0, B0);
  j["predicted_scaled_mean"] = mean;
  return j;
}

json summary_json(const EnsembleConfig& cfg, const EnsembleResult& result) {
  json j;
  j["schema"] = kSummarySchema;
  if (const auto* urn = std::get_if<UrnModel>(&cfg.model)) {
    j["model"] = {{"kind", "urn"}, {"matrix", matrix_json(urn->matrix)}, {"W0", urn->W0}, {"B0", urn->B0}};
  } else {
    const auto& p = std::get<SyntheticModel>(cfg.model).process;
    j["model"] = {{"kind", "synthetic"},
                  {"gamma", p.gamma},
                  {"sigma2", p.sigma2},
                  {"noise_bound", p.noise_bound},
                  {"step_family", to_string(p.step_family)},
                  {"z0", p.z0}};
  }
  j["horizon"] = cfg.horizon;
  j["paths"] = cfg.paths;
  j["seed"] = cfg.master_seed;
  j["checkpoint_factor"] = cfg.checkpoint_factor;
  j["convention"] = to_string(cfg.convention);
  j["scaling"] = {{"x", result.scaling.x}, {"y", result.scaling.y}, {"forced", cfg.forced_scaling.has_value()}};
  j["prediction"] = result.prediction ? prediction_json(*result.prediction) : json(nullptr);
  j["predicted_variance"] = optional_number(result.predicted_variance);
  j["predicted_mean"] = optional_number(result.predicted_mean);
  j["summary"] = summary_stats(result.summary);
  if (result.ks) {
    const KsVerdict& ks = *result.ks;
    j["ks"] = {{"reference", ks.reference},
               {"ref_mean", ks.ref_mean},
               {"ref_variance", ks.ref_variance},
               {"statistic", ks.statistic},
               {"critical_5", ks.critical_5},
               {"critical_1", ks.critical_1},
               {"reject_5", ks.reject_5},
               {"reject_1", ks.reject_1}};
  } else {
    j["ks"] = nullptr;
  }
  json cps = json::array();
  for (const CheckpointSummary& c : result.checkpoints) {
    json e = summary_stats(c.summary);
    e["n"] = c.n;
    cps.push_back(e);
  }
  j["checkpoints"] = cps;
  return j;
}

void write_values_csv(std::ostream& os, std::span<const double> values) {
  os << "path_id,z_value\n";
  for (std::size_t i = 0; i < values.size(); ++i) os << i << ',' << format_double(values[i]) << '\n';
}

void write_path_csv(std::ostream& os, std::span<const PathPoint> path, const ReplacementMatrix& m,
                    const LimitPrediction& prediction, Scaling scaling, ScalingConvention convention) {
  const DriftPoly f = drift_from_matrix(m);
  const double center = prediction.has_zero ? prediction.p : (path.empty() ? 0.0 : path.front().X);
  os << "n,X_n,scaled,gamma_hat_n,L_n\n";
  for (const PathPoint& pt : path) {
    os << pt.n << ',' << format_double(pt.X) << ','
       << format_double(scale_factor(pt.n, scaling, convention) * (pt.X - center)) << ',';
    if (pt.n >= 1 && prediction.has_zero) {
      const double gh = gamma_hat_n(f, prediction.p, pt.n, pt.T, pt.X_prev);
      const double L = std::abs(gh - prediction.gamma_hat) /
                       (std::abs(pt.X - prediction.p) + 1.0 / static_cast<double>(pt.n));
      os << format_double(gh) << ',' << format_double(L);
    } else {
      os << ',';
    }
    os << '\n';
  }
}

}  // namespace urnsa
