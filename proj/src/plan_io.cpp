#include "asmctl/plan_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "asmctl/error.hpp"

namespace asmctl {

using nlohmann::json;

namespace json_util {

void require_object(const json& j, const std::string& context) {
  if (!j.is_object()) throw Error(ErrorCode::kValidation, context + ": expected an object");
}

void reject_unknown_keys(const json& j, std::initializer_list<std::string_view> allowed,
                         const std::string& context) {
  for (const auto& [key, _] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw Error(ErrorCode::kValidation, context + ": unknown key '" + key + "'");
    }
  }
}

const json& field(const json& j, const char* key, const std::string& context) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw Error(ErrorCode::kValidation, context + ": missing key '" + key + "'");
  }
  return *it;
}

std::string string_field(const json& j, const char* key, const std::string& context) {
  const json& v = field(j, key, context);
  if (!v.is_string()) {
    throw Error(ErrorCode::kValidation, context + ": '" + key + "' must be a string");
  }
  return v.get<std::string>();
}

double number_field(const json& j, const char* key, const std::string& context) {
  const json& v = field(j, key, context);
  if (!v.is_number()) {
    throw Error(ErrorCode::kValidation, context + ": '" + key + "' must be a number");
  }
  return v.get<double>();
}

std::int64_t integer_field(const json& j, const char* key, const std::string& context) {
  const json& v = field(j, key, context);
  if (!v.is_number_integer()) {
    throw Error(ErrorCode::kValidation, context + ": '" + key + "' must be an integer");
  }
  return v.get<std::int64_t>();
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kValidation, path.string() + ": " + e.what());
  }
}

}  // namespace json_util

using namespace json_util;

namespace {

CatalogEntry catalog_entry_from_json(const json& j, const std::string& ctx) {
  require_object(j, ctx);
  reject_unknown_keys(j, {"id", "display_name"}, ctx);
  CatalogEntry e;
  e.id = string_field(j, "id", ctx);
  e.display_name = j.contains("display_name") ? string_field(j, "display_name", ctx) : e.id;
  return e;
}

std::vector<CatalogEntry> catalog_from_json(const json& j, const std::string& ctx) {
  if (!j.is_array()) throw Error(ErrorCode::kValidation, ctx + ": expected an array");
  std::vector<CatalogEntry> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(catalog_entry_from_json(j[i], ctx + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Zone zone_from_json(const json& j, const std::string& ctx) {
  require_object(j, ctx);
  reject_unknown_keys(j, {"id", "x", "y", "w", "h", "is_assembly_zone"}, ctx);
  Zone z;
  z.id = string_field(j, "id", ctx);
  z.rect = Rect{number_field(j, "x", ctx), number_field(j, "y", ctx),
                number_field(j, "w", ctx), number_field(j, "h", ctx)};
  if (j.contains("is_assembly_zone")) {
    const json& flag = j["is_assembly_zone"];
    if (!flag.is_boolean()) {
      throw Error(ErrorCode::kValidation, ctx + ": 'is_assembly_zone' must be a boolean");
    }
    z.is_assembly_zone = flag.get<bool>();
  }
  return z;
}

StageSpec stage_from_json(const json& j, const std::string& ctx) {
  require_object(j, ctx);
  reject_unknown_keys(j, {"index", "kind", "requirements", "instruction"}, ctx);
  StageSpec s;
  s.index = static_cast<int>(integer_field(j, "index", ctx));
  const std::string kind = string_field(j, "kind", ctx);
  s.instruction = j.contains("instruction") ? string_field(j, "instruction", ctx) : "";
  const json& req = field(j, "requirements", ctx);
  const std::string rctx = ctx + ".requirements";
  if (kind == "placement") {
    s.kind = StageKind::kPlacement;
    if (!req.is_array()) throw Error(ErrorCode::kValidation, rctx + ": expected an array");
    for (std::size_t i = 0; i < req.size(); ++i) {
      const std::string ictx = rctx + "[" + std::to_string(i) + "]";
      require_object(req[i], ictx);
      reject_unknown_keys(req[i], {"part", "zone", "count"}, ictx);
      PlacementRequirement r;
      r.part_id = string_field(req[i], "part", ictx);
      r.zone_id = string_field(req[i], "zone", ictx);
      r.count = req[i].contains("count") ? static_cast<int>(integer_field(req[i], "count", ictx)) : 1;
      s.placements.push_back(std::move(r));
    }
  } else if (kind == "connection") {
    s.kind = StageKind::kConnection;
    require_object(req, rctx);
    reject_unknown_keys(req, {"connection"}, rctx);
    s.connection_id = string_field(req, "connection", rctx);
  } else {
    throw Error(ErrorCode::kValidation,
                ctx + ": kind must be \"placement\" or \"connection\", got \"" + kind + "\"");
  }
  return s;
}

}  // namespace

AssemblyPlan plan_from_json(const json& doc) {
  const std::string ctx = "plan";
  require_object(doc, ctx);
  reject_unknown_keys(doc, {"plan_id", "zones", "parts", "connections", "stages"}, ctx);
  AssemblyPlan plan;
  plan.plan_id = string_field(doc, "plan_id", ctx);

  const json& zones = field(doc, "zones", ctx);
  if (!zones.is_array()) throw Error(ErrorCode::kValidation, "plan.zones: expected an array");
  for (std::size_t i = 0; i < zones.size(); ++i) {
    plan.zones.push_back(zone_from_json(zones[i], "plan.zones[" + std::to_string(i) + "]"));
  }
  plan.parts = catalog_from_json(field(doc, "parts", ctx), "plan.parts");
  plan.connections = catalog_from_json(field(doc, "connections", ctx), "plan.connections");

  const json& stages = field(doc, "stages", ctx);
  if (!stages.is_array()) throw Error(ErrorCode::kValidation, "plan.stages: expected an array");
  for (std::size_t i = 0; i < stages.size(); ++i) {
    plan.stages.push_back(stage_from_json(stages[i], "plan.stages[" + std::to_string(i) + "]"));
  }
  return plan;
}

json plan_to_json(const AssemblyPlan& plan) {
  json zones = json::array();
  for (const auto& z : plan.zones) {
    zones.push_back({{"id", z.id},
                     {"x", z.rect.x},
                     {"y", z.rect.y},
                     {"w", z.rect.w},
                     {"h", z.rect.h},
                     {"is_assembly_zone", z.is_assembly_zone}});
  }
  auto catalog = [](const std::vector<CatalogEntry>& entries) {
    json out = json::array();
    for (const auto& e : entries) out.push_back({{"id", e.id}, {"display_name", e.display_name}});
    return out;
  };
  json stages = json::array();
  for (const auto& s : plan.stages) {
    json req;
    if (s.kind == StageKind::kPlacement) {
      req = json::array();
      for (const auto& r : s.placements) {
        req.push_back({{"part", r.part_id}, {"zone", r.zone_id}, {"count", r.count}});
      }
    } else {
      req = {{"connection", s.connection_id}};
    }
    stages.push_back({{"index", s.index},
                      {"kind", std::string(to_string(s.kind))},
                      {"requirements", req},
                      {"instruction", s.instruction}});
  }
  return {{"plan_id", plan.plan_id},
          {"zones", zones},
          {"parts", catalog(plan.parts)},
          {"connections", catalog(plan.connections)},
          {"stages", stages}};
}

AssemblyPlan load_plan(const std::filesystem::path& path) {
  return plan_from_json(read_json_file(path));
}

EngineConfig config_from_json(const json& doc) {
  const std::string ctx = "config";
  require_object(doc, ctx);
  reject_unknown_keys(doc, {"overlap_threshold", "connection_threshold", "frame_period_ms"}, ctx);
  EngineConfig c;
  if (doc.contains("overlap_threshold")) c.overlap_threshold = number_field(doc, "overlap_threshold", ctx);
  if (doc.contains("connection_threshold")) {
    c.connection_threshold = number_field(doc, "connection_threshold", ctx);
  }
  if (doc.contains("frame_period_ms")) c.frame_period_ms = integer_field(doc, "frame_period_ms", ctx);
  return c;
}

json config_to_json(const EngineConfig& config) {
  return {{"overlap_threshold", config.overlap_threshold},
          {"connection_threshold", config.connection_threshold},
          {"frame_period_ms", config.frame_period_ms}};
}

}  // namespace asmctl
