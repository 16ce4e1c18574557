#pragma once

#include <string>

#include <json.hpp>

#include "taylor_sr/features.hpp"
#include "taylor_sr/pipeline.hpp"

namespace tsr {

inline constexpr const char* kReportVersion = "1";

nlohmann::json interval_json(const Interval& iv);
nlohmann::json features_json(const FeatureSet& f);
nlohmann::json config_json(const PipelineConfig& cfg);

// The report envelope: {version, command, config, seed, result, features,
// trace}. with_timing=false zeroes wall_ms and drops the timestamp so two
// identical runs serialize byte-identically.
nlohmann::json run_report(const RunResult& r, const std::string& command,
                          const PipelineConfig& cfg, bool with_timing);

}  // namespace tsr
