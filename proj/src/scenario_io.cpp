#include "asmctl/scenario_io.hpp"

#include "asmctl/error.hpp"
#include "asmctl/plan_io.hpp"

namespace asmctl {

using nlohmann::json;
using namespace json_util;

json action_to_json(const OperatorAction& a) {
  return std::visit(
      [](const auto& act) -> json {
        using T = std::decay_t<decltype(act)>;
        if constexpr (std::is_same_v<T, action::PlacePart>) {
          return {{"type", "place_part"},
                  {"part", act.part},
                  {"zone", act.zone},
                  {"bbox", {{"x", act.bbox.x}, {"y", act.bbox.y}, {"w", act.bbox.w}, {"h", act.bbox.h}}}};
        } else if constexpr (std::is_same_v<T, action::RemovePart>) {
          return {{"type", "remove_part"}, {"part", act.part}, {"zone", act.zone}};
        } else {
          return {{"type", "show_connection"},
                  {"connection", act.connection},
                  {"duration_ms", act.duration_ms},
                  {"leading_prob", act.leading_prob},
                  {"aux_prob", act.aux_prob}};
        }
      },
      a);
}

OperatorAction action_from_json(const json& j, const AssemblyPlan* plan) {
  const std::string ctx = "action";
  require_object(j, ctx);
  const std::string type = string_field(j, "type", ctx);
  if (type == "place_part") {
    reject_unknown_keys(j, {"type", "part", "zone", "bbox"}, ctx);
    action::PlacePart p{string_field(j, "part", ctx), string_field(j, "zone", ctx), {}};
    if (j.contains("bbox")) {
      const json& b = j["bbox"];
      require_object(b, ctx + ".bbox");
      reject_unknown_keys(b, {"x", "y", "w", "h"}, ctx + ".bbox");
      p.bbox = Rect{number_field(b, "x", ctx), number_field(b, "y", ctx), number_field(b, "w", ctx),
                    number_field(b, "h", ctx)};
    } else {
      const Zone* zone = plan ? plan->find_zone(p.zone) : nullptr;
      if (zone == nullptr) {
        throw Error(ErrorCode::kValidation,
                    ctx + ": place_part without bbox needs a known zone, got '" + p.zone + "'");
      }
      p.bbox = default_bbox(zone->rect);
    }
    return p;
  }
  if (type == "remove_part") {
    reject_unknown_keys(j, {"type", "part", "zone"}, ctx);
    return action::RemovePart{string_field(j, "part", ctx), string_field(j, "zone", ctx)};
  }
  if (type == "show_connection") {
    reject_unknown_keys(j, {"type", "connection", "duration_ms", "leading_prob", "aux_prob"}, ctx);
    action::ShowConnection s;
    s.connection = string_field(j, "connection", ctx);
    s.duration_ms = j.contains("duration_ms") ? integer_field(j, "duration_ms", ctx) : 1;
    s.leading_prob = j.contains("leading_prob") ? number_field(j, "leading_prob", ctx) : 1.0;
    s.aux_prob = j.contains("aux_prob") ? number_field(j, "aux_prob", ctx) : 1.0;
    return s;
  }
  throw Error(ErrorCode::kValidation, ctx + ": unknown action type '" + type + "'");
}

json scenario_to_json(std::span<const ScenarioEvent> events) {
  json out = json::array();
  for (const auto& e : events) out.push_back({{"at_ms", e.at_ms}, {"action", action_to_json(e.action)}});
  return out;
}

std::vector<ScenarioEvent> scenario_from_json(const json& doc, const AssemblyPlan* plan) {
  if (!doc.is_array()) throw Error(ErrorCode::kValidation, "scenario must be a JSON array");
  std::vector<ScenarioEvent> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::string ctx = "scenario[" + std::to_string(i) + "]";
    require_object(doc[i], ctx);
    reject_unknown_keys(doc[i], {"at_ms", "action"}, ctx);
    ScenarioEvent e{integer_field(doc[i], "at_ms", ctx), action_from_json(field(doc[i], "action", ctx), plan)};
    validate_event(e);
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<ScenarioEvent> load_scenario(const std::filesystem::path& path, const AssemblyPlan* plan) {
  return scenario_from_json(read_json_file(path), plan);
}

}  // namespace asmctl
