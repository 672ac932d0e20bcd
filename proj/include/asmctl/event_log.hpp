#pragma once

#include <iosfwd>
#include <span>

#include <nlohmann/json.hpp>

#include "asmctl/engine.hpp"

namespace asmctl {

// {"timestamp_ms":..., "type":"missing_detail", "payload":{...}}
nlohmann::json message_to_json(const OperatorMessage& m);
OperatorMessage message_from_json(const nlohmann::json& j);

// {"timestamp_ms":..., "type":"stage_transition", "payload":{"stage_index":...}}
nlohmann::json transition_to_json(const StageTransition& t);

// Messages and transitions in engine order: each transition precedes the
// ProceedNextStage message that announces it.
std::vector<nlohmann::json> event_log_entries(std::span<const OperatorMessage> messages,
                                              std::span<const StageTransition> transitions);

// One JSON object per line.
void write_event_log(std::ostream& out, const SessionResult& result);

}  // namespace asmctl
