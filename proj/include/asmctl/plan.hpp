#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "asmctl/geometry.hpp"

namespace asmctl {

struct Zone {
  std::string id;
  Rect rect;
  bool is_assembly_zone = false;

  bool operator==(const Zone&) const = default;
};

// Catalog entry shared by parts and connections.
struct CatalogEntry {
  std::string id;
  std::string display_name;

  bool operator==(const CatalogEntry&) const = default;
};

using PartClass = CatalogEntry;
using ConnectionClass = CatalogEntry;

enum class StageKind { kPlacement, kConnection };

struct PlacementRequirement {
  std::string part_id;
  std::string zone_id;
  int count = 1;

  bool operator==(const PlacementRequirement&) const = default;
};

struct StageSpec {
  int index = 0;
  StageKind kind = StageKind::kPlacement;
  std::vector<PlacementRequirement> placements;  // kPlacement only
  std::string connection_id;                     // kConnection only
  std::string instruction;

  bool operator==(const StageSpec&) const = default;
};

struct AssemblyPlan {
  std::string plan_id;
  std::vector<Zone> zones;
  std::vector<PartClass> parts;
  std::vector<ConnectionClass> connections;
  std::vector<StageSpec> stages;

  std::size_t stage_count() const { return stages.size(); }
  const Zone* find_zone(const std::string& id) const;
  const Zone* assembly_zone() const;
  bool has_part(const std::string& id) const;
  bool has_connection(const std::string& id) const;

  bool operator==(const AssemblyPlan&) const = default;
};

struct EngineConfig {
  double overlap_threshold = 0.7;
  double connection_threshold = 0.6;
  std::int64_t frame_period_ms = 100;

  bool operator==(const EngineConfig&) const = default;
};

// Empty when the config satisfies its bounds, otherwise a description.
std::vector<std::string> validate_config(const EngineConfig& config);

struct ValidationResult {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

ValidationResult validate_plan(const AssemblyPlan& plan);

// Throws Error(kValidation) listing every violation.
void require_valid(const AssemblyPlan& plan);
void require_valid(const EngineConfig& config);

std::string_view to_string(StageKind kind);

}  // namespace asmctl
