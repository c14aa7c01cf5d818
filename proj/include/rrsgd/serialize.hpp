#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "rrsgd/analysis.hpp"
#include "rrsgd/engine.hpp"
#include "rrsgd/problems.hpp"
#include "rrsgd/schedules.hpp"

// Problems serialize by generator inputs {kind, n, d, mu, L, seed} and are
// regenerated on load, so configs stay small and results are reproducible.

namespace rrsgd {

nlohmann::json problem_to_json(const FiniteSumProblem& p);
FiniteSumProblem problem_from_json(const nlohmann::json& j);

nlohmann::json schedule_to_json(const StepSchedule& s);
StepSchedule schedule_from_json(const nlohmann::json& j);

nlohmann::json run_result_to_json(const RunResult& r);

nlohmann::json sweep_config_to_json(const SweepConfig& c);
SweepConfig sweep_config_from_json(const nlohmann::json& j);

nlohmann::json rate_fit_to_json(const RateFit& f);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& contents);

}  // namespace rrsgd
