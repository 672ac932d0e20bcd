#include "asmctl/plan.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <utility>

#include "asmctl/error.hpp"

namespace asmctl {

const Zone* AssemblyPlan::find_zone(const std::string& id) const {
  auto it = std::find_if(zones.begin(), zones.end(),
                         [&](const Zone& z) { return z.id == id; });
  return it == zones.end() ? nullptr : &*it;
}

const Zone* AssemblyPlan::assembly_zone() const {
  auto it = std::find_if(zones.begin(), zones.end(),
                         [](const Zone& z) { return z.is_assembly_zone; });
  return it == zones.end() ? nullptr : &*it;
}

bool AssemblyPlan::has_part(const std::string& id) const {
  return std::any_of(parts.begin(), parts.end(),
                     [&](const PartClass& p) { return p.id == id; });
}

bool AssemblyPlan::has_connection(const std::string& id) const {
  return std::any_of(connections.begin(), connections.end(),
                     [&](const ConnectionClass& c) { return c.id == id; });
}

std::string_view to_string(StageKind kind) {
  return kind == StageKind::kPlacement ? "placement" : "connection";
}

std::vector<std::string> validate_config(const EngineConfig& config) {
  std::vector<std::string> out;
  if (!(config.overlap_threshold > 0.0 && config.overlap_threshold <= 1.0)) {
    out.push_back("overlap_threshold must be in (0,1]");
  }
  if (!(config.connection_threshold > 0.0 && config.connection_threshold < 1.0)) {
    out.push_back("connection_threshold must be in (0,1)");
  }
  if (config.frame_period_ms <= 0) {
    out.push_back("frame_period_ms must be positive");
  }
  return out;
}

namespace {

template <typename T, typename Key>
void check_unique(const std::vector<T>& items, Key key, const char* what,
                  std::vector<std::string>& out) {
  std::set<std::string> seen;
  for (const auto& item : items) {
    const std::string& id = key(item);
    if (id.empty()) out.push_back(std::string(what) + " with empty id");
    if (!seen.insert(id).second) {
      out.push_back("duplicate " + std::string(what) + " id '" + id + "'");
    }
  }
}

}  // namespace

ValidationResult validate_plan(const AssemblyPlan& plan) {
  std::vector<std::string> v;
  if (plan.plan_id.empty()) v.push_back("plan_id is empty");

  check_unique(plan.zones, [](const Zone& z) -> const std::string& { return z.id; },
               "zone", v);
  check_unique(plan.parts, [](const PartClass& p) -> const std::string& { return p.id; },
               "part", v);
  check_unique(plan.connections,
               [](const ConnectionClass& c) -> const std::string& { return c.id; },
               "connection", v);

  for (const auto& zone : plan.zones) {
    if (!is_valid(zone.rect)) v.push_back("zone '" + zone.id + "' has invalid rect");
  }
  const auto assembly_zones =
      std::count_if(plan.zones.begin(), plan.zones.end(),
                    [](const Zone& z) { return z.is_assembly_zone; });
  if (assembly_zones == 0) v.push_back("plan has no assembly zone");
  if (assembly_zones > 1) v.push_back("plan has more than one assembly zone");

  if (plan.stages.empty()) v.push_back("plan has zero stages");
  for (std::size_t i = 0; i < plan.stages.size(); ++i) {
    const StageSpec& s = plan.stages[i];
    const std::string tag = "stage " + std::to_string(i);
    if (s.index != static_cast<int>(i)) {
      v.push_back(tag + " carries index " + std::to_string(s.index));
    }
    if (s.kind == StageKind::kPlacement) {
      if (s.placements.empty()) v.push_back(tag + " has no placement requirements");
      if (!s.connection_id.empty()) v.push_back(tag + " is a placement stage with a connection");
      std::set<std::pair<std::string, std::string>> pairs;
      for (const auto& r : s.placements) {
        if (!plan.has_part(r.part_id)) v.push_back(tag + " references unknown part '" + r.part_id + "'");
        if (plan.find_zone(r.zone_id) == nullptr) {
          v.push_back(tag + " references unknown zone '" + r.zone_id + "'");
        }
        if (r.count < 1) v.push_back(tag + " requires count < 1 for part '" + r.part_id + "'");
        if (!pairs.emplace(r.part_id, r.zone_id).second) {
          v.push_back(tag + " repeats requirement (" + r.part_id + ", " + r.zone_id + ")");
        }
      }
    } else {
      if (!s.placements.empty()) v.push_back(tag + " is a connection stage with placements");
      if (!plan.has_connection(s.connection_id)) {
        v.push_back(tag + " references unknown connection '" + s.connection_id + "'");
      }
    }
  }
  return ValidationResult{std::move(v)};
}

namespace {

[[noreturn]] void throw_violations(const std::string& what,
                                   const std::vector<std::string>& violations) {
  std::ostringstream os;
  os << what << ":";
  for (const auto& s : violations) os << "\n  - " << s;
  throw Error(ErrorCode::kValidation, os.str());
}

}  // namespace

void require_valid(const AssemblyPlan& plan) {
  auto result = validate_plan(plan);
  if (!result.ok()) throw_violations("invalid plan", result.violations);
}

void require_valid(const EngineConfig& config) {
  auto violations = validate_config(config);
  if (!violations.empty()) throw_violations("invalid engine config", violations);
}

}  // namespace asmctl
