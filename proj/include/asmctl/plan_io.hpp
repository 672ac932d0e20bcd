#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "asmctl/plan.hpp"

namespace asmctl {

// Plan files are JSON; see docs/formats.md. Unknown keys are rejected.
// Structural problems throw Error(kValidation); semantic checks are left to
// validate_plan so callers can report every violation at once.
AssemblyPlan plan_from_json(const nlohmann::json& doc);
nlohmann::json plan_to_json(const AssemblyPlan& plan);

AssemblyPlan load_plan(const std::filesystem::path& path);

EngineConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const EngineConfig& config);

// Shared helpers for strict JSON objects.
namespace json_util {

void require_object(const nlohmann::json& j, const std::string& context);
void reject_unknown_keys(const nlohmann::json& j,
                         std::initializer_list<std::string_view> allowed,
                         const std::string& context);
const nlohmann::json& field(const nlohmann::json& j, const char* key,
                            const std::string& context);
std::string string_field(const nlohmann::json& j, const char* key,
                         const std::string& context);
double number_field(const nlohmann::json& j, const char* key,
                    const std::string& context);
std::int64_t integer_field(const nlohmann::json& j, const char* key,
                           const std::string& context);

nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace json_util

}  // namespace asmctl
