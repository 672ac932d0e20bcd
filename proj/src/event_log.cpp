#include "asmctl/event_log.hpp"

#include <ostream>

#include "asmctl/error.hpp"
#include "asmctl/plan_io.hpp"

namespace asmctl {

using nlohmann::json;

json message_to_json(const OperatorMessage& m) {
  json payload = std::visit(
      [](const auto& body) -> json {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, msg::MissingDetail> || std::is_same_v<T, msg::ExtraDetail>) {
          return {{"part", body.part}, {"zone", body.zone}};
        } else if constexpr (std::is_same_v<T, msg::WrongConnection>) {
          return {{"seen", body.seen}, {"expected", body.expected}};
        } else if constexpr (std::is_same_v<T, msg::StageInstruction>) {
          return {{"text", body.text}};
        } else {
          return {{"new_stage_index", body.new_stage_index}};
        }
      },
      m.body);
  return {{"timestamp_ms", m.timestamp_ms},
          {"type", std::string(message_type(m))},
          {"payload", std::move(payload)}};
}

OperatorMessage message_from_json(const json& j) {
  using namespace json_util;
  const std::string ctx = "message";
  require_object(j, ctx);
  OperatorMessage m;
  m.timestamp_ms = integer_field(j, "timestamp_ms", ctx);
  const std::string type = string_field(j, "type", ctx);
  const json& p = field(j, "payload", ctx);
  if (type == "missing_detail") {
    m.body = msg::MissingDetail{string_field(p, "part", ctx), string_field(p, "zone", ctx)};
  } else if (type == "extra_detail") {
    m.body = msg::ExtraDetail{string_field(p, "part", ctx), string_field(p, "zone", ctx)};
  } else if (type == "wrong_connection") {
    m.body = msg::WrongConnection{string_field(p, "seen", ctx), string_field(p, "expected", ctx)};
  } else if (type == "stage_instruction") {
    m.body = msg::StageInstruction{string_field(p, "text", ctx)};
  } else if (type == "proceed_next_stage") {
    m.body = msg::ProceedNextStage{static_cast<int>(integer_field(p, "new_stage_index", ctx))};
  } else {
    throw Error(ErrorCode::kValidation, "unknown message type '" + type + "'");
  }
  return m;
}

json transition_to_json(const StageTransition& t) {
  return {{"timestamp_ms", t.start_timestamp_ms},
          {"type", "stage_transition"},
          {"payload", {{"stage_index", t.stage_index}}}};
}

std::vector<json> event_log_entries(std::span<const OperatorMessage> messages,
                                    std::span<const StageTransition> transitions) {
  std::vector<json> out;
  out.reserve(messages.size() + transitions.size());
  std::size_t next_transition = 0;
  for (const auto& m : messages) {
    if (const auto* proceed = std::get_if<msg::ProceedNextStage>(&m.body)) {
      if (next_transition < transitions.size() &&
          transitions[next_transition].stage_index == proceed->new_stage_index) {
        out.push_back(transition_to_json(transitions[next_transition++]));
      }
    }
    out.push_back(message_to_json(m));
  }
  for (; next_transition < transitions.size(); ++next_transition) {
    out.push_back(transition_to_json(transitions[next_transition]));
  }
  return out;
}

void write_event_log(std::ostream& out, const SessionResult& result) {
  for (const auto& entry : event_log_entries(result.messages, result.transitions)) {
    out << entry.dump() << '\n';
  }
  out << json{{"type", "session_summary"},
              {"timestamp_ms", result.transitions.empty() ? result.session_start_ms.value_or(0)
                                                          : result.transitions.back().start_timestamp_ms},
              {"payload", {{"completed", result.completed},
                           {"transitions", result.transitions.size()}}}}
             .dump()
      << '\n';
}

}  // namespace asmctl
