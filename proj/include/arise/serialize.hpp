#pragma once

#include "arise/estimators.hpp"
#include "arise/hypothesis.hpp"
#include "arise/ldss.hpp"
#include "arise/montecarlo.hpp"

#include <json.hpp>

namespace arise {

// All emitted documents carry "schema_version": 1.
inline constexpr int kSchemaVersion = 1;

nlohmann::json to_json(const MemoryEstimate& est, const EstimatorConfig& config);
nlohmann::json to_json(const TestReport& report, const EstimatorConfig& config);
nlohmann::json to_json(const LdssModel& model);
LdssModel ldss_model_from_json(const nlohmann::json& j);

ExperimentPlan plan_from_json(const nlohmann::json& j);

void write_json_file(const std::string& path, const nlohmann::json& document);
nlohmann::json read_json_file(const std::string& path);

} // namespace arise
