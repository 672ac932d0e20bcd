#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "asmctl/plan.hpp"
#include "asmctl/simulator.hpp"

namespace asmctl {

// {"type":"place_part","part":..,"zone":..,"bbox":{x,y,w,h}}
// {"type":"remove_part","part":..,"zone":..}
// {"type":"show_connection","connection":..,"duration_ms":..,"leading_prob":..,"aux_prob":..}
// A place_part without bbox is resolved against the plan via default_bbox.
nlohmann::json action_to_json(const OperatorAction& a);
OperatorAction action_from_json(const nlohmann::json& j, const AssemblyPlan* plan = nullptr);

// Scenario files: a JSON array of {"at_ms":..., "action":{...}}.
nlohmann::json scenario_to_json(std::span<const ScenarioEvent> events);
std::vector<ScenarioEvent> scenario_from_json(const nlohmann::json& doc,
                                              const AssemblyPlan* plan = nullptr);
std::vector<ScenarioEvent> load_scenario(const std::filesystem::path& path,
                                         const AssemblyPlan* plan = nullptr);

}  // namespace asmctl
