#include "asmctl/reference_plan.hpp"

namespace asmctl {

namespace {

StageSpec placement(int index, std::vector<PlacementRequirement> reqs, std::string text) {
  StageSpec s;
  s.index = index;
  s.kind = StageKind::kPlacement;
  s.placements = std::move(reqs);
  s.instruction = std::move(text);
  return s;
}

StageSpec connection(int index, std::string connection_id, std::string text) {
  StageSpec s;
  s.index = index;
  s.kind = StageKind::kConnection;
  s.connection_id = std::move(connection_id);
  s.instruction = std::move(text);
  return s;
}

}  // namespace

AssemblyPlan reference_plan() {
  AssemblyPlan plan;
  plan.plan_id = "reducer-12";
  plan.zones = {
      {"assembly", Rect{0.35, 0.25, 0.30, 0.50}, true},
      {"tray_left", Rect{0.03, 0.10, 0.25, 0.80}, false},
      {"tray_right", Rect{0.72, 0.10, 0.25, 0.80}, false},
  };
  plan.parts = {
      {"housing", "Housing"}, {"shaft", "Shaft"},   {"bearing", "Bearing"},
      {"gear", "Gear"},       {"spacer", "Spacer"}, {"cover", "Cover"},
      {"bolt", "Bolt"},
  };
  plan.connections = {
      {"shaft_housing", "Shaft seated in housing"},
      {"bearing_shaft", "Bearing pressed onto shaft"},
      {"gear_shaft", "Gear keyed onto shaft"},
      {"spacer_gear", "Spacer against gear"},
      {"cover_housing", "Cover closed on housing"},
      {"bolt_cover", "Bolt fastened through cover"},
  };
  plan.stages = {
      placement(0, {{"housing", "assembly", 1}, {"shaft", "tray_left", 1}},
                "Place the housing in the assembly zone and the shaft on the left tray"),
      connection(1, "shaft_housing", "Insert the shaft into the housing"),
      placement(2, {{"bearing", "assembly", 1}}, "Place the bearing in the assembly zone"),
      connection(3, "bearing_shaft", "Press the bearing onto the shaft"),
      placement(4, {{"gear", "assembly", 1}}, "Place the gear in the assembly zone"),
      connection(5, "gear_shaft", "Key the gear onto the shaft"),
      placement(6, {{"spacer", "assembly", 1}}, "Place the spacer in the assembly zone"),
      connection(7, "spacer_gear", "Seat the spacer against the gear"),
      placement(8, {{"cover", "tray_right", 1}}, "Put the cover on the right tray"),
      connection(9, "cover_housing", "Close the housing with the cover"),
      placement(10, {{"bolt", "assembly", 1}}, "Place the bolt in the assembly zone"),
      connection(11, "bolt_cover", "Fasten the bolt through the cover"),
  };
  return plan;
}

}  // namespace asmctl
