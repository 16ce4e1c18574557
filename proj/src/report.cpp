#include "taylor_sr/report.hpp"

#include <chrono>
#include <cmath>

namespace tsr {

using nlohmann::json;

namespace {

// JSON has no infinities; clamp to null.
json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

json interval_json(const Interval& iv) {
  return json{{"lo", finite_or_null(iv.lo)}, {"hi", finite_or_null(iv.hi)}};
}

json features_json(const FeatureSet& f) {
  json j;
  j["low_order_degree"] =
      f.low_order_degree ? json(*f.low_order_degree) : json(nullptr);
  j["additive_partition"] = f.additive_partition;
  if (f.multiplicative) {
    j["multiplicative_partition"] = f.multiplicative->groups;
    j["multiplicative_sign"] = f.multiplicative->sign;
  } else {
    j["multiplicative_partition"] = nullptr;
  }
  j["boundary"] = interval_json(f.boundary);
  json mono = json::array();
  for (auto m : f.monotonicity) mono.push_back(to_string(m));
  j["monotonicity"] = mono;
  j["joint_monotonicity"] = to_string(f.joint_monotonicity);
  j["parity"] = to_string(f.parity);
  json dom = json::array();
  for (const auto& d : f.domain) dom.push_back(interval_json(d));
  j["domain"] = dom;
  return j;
}

json config_json(const PipelineConfig& cfg) {
  return json{
      {"pop_size", cfg.evo.pop_size},
      {"max_gen", cfg.evo.max_gen},
      {"alpha", cfg.evo.alpha},
      {"beta", cfg.evo.beta},
      {"threshold", cfg.evo.threshold},
      {"max_len", cfg.evo.max_len},
      {"erc_range", interval_json(cfg.evo.erc_range)},
      {"tournament", cfg.evo.tournament},
      {"tournament_size", cfg.evo.tournament_size},
      {"k_max_override", cfg.fit.k_max_override},
      {"oversample", cfg.fit.oversample},
      {"ridge", cfg.fit.ridge},
      {"coef_eps", cfg.fit.coef_eps},
      {"beam", cfg.beam},
      {"subspace_depth", cfg.subspace_depth},
  };
}

json run_report(const RunResult& r, const std::string& command,
                const PipelineConfig& cfg, bool with_timing) {
  json j;
  j["version"] = kReportVersion;
  j["command"] = command;
  j["config"] = config_json(cfg);
  j["seed"] = r.seed;
  j["result"] = json{
      {"expression", r.expression},
      {"rmse", finite_or_null(r.rmse_value)},
      {"r2", finite_or_null(r.r2_value)},
      {"generations", r.generations},
      {"wall_ms", with_timing ? json(r.wall_ms) : json(0.0)},
      {"low_order_exit", r.low_order_exit},
  };
  j["features"] = r.features ? features_json(*r.features) : json(nullptr);
  json trace = json::array();
  for (const auto& t : r.trace)
    trace.push_back(json{{"subproblem", t.subproblem},
                         {"generation", t.generation},
                         {"best_rmse", finite_or_null(t.best_rmse)},
                         {"mean_rmse", finite_or_null(t.mean_rmse)},
                         {"best_len", t.best_len}});
  j["trace"] = trace;
  if (with_timing) {
    const auto now = std::chrono::system_clock::now();
    j["timestamp_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                            now.time_since_epoch())
                            .count();
  }
  return j;
}

}  // namespace tsr
