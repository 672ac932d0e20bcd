#include "asmctl/service.hpp"

#include <sstream>

#include "asmctl/error.hpp"
#include "asmctl/event_log.hpp"
#include "asmctl/plan_io.hpp"
#include "asmctl/scenario_io.hpp"
#include "asmctl/timeline_csv.hpp"

namespace asmctl {

using nlohmann::json;

struct SessionService::Session {
  std::string id;
  std::shared_ptr<const AssemblyPlan> plan;
  std::int64_t created_at_ms = 0;

  mutable std::mutex mutex;
  mutable std::condition_variable changed;
  EngineState engine;
  std::vector<ScenarioEvent> world_events;
  std::vector<ClientEvent> log;
  std::vector<PushRecord> records;

  SessionSnapshot snapshot() const {
    SessionSnapshot s;
    s.current_stage = engine.current_stage_index;
    s.stage_count = static_cast<int>(plan->stage_count());
    s.completed = engine.completed;
    s.zone_occupancy = engine.zone_occupancy;
    if (!engine.completed) s.instruction = engine.current_stage().instruction;
    return s;
  }

  SessionDescriptor descriptor() const {
    return SessionDescriptor{id, plan->plan_id, created_at_ms, snapshot()};
  }
};

SessionDescriptor SessionService::create_session(const AssemblyPlan& plan, const EngineConfig& config) {
  auto session = std::make_shared<Session>();
  session->plan = std::make_shared<const AssemblyPlan>(plan);
  session->engine = make_engine_state(session->plan, config);
  session->id = "s-" + std::to_string(next_id_.fetch_add(1));
  session->created_at_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                               std::chrono::system_clock::now().time_since_epoch())
                               .count();
  SessionDescriptor d = session->descriptor();
  std::unique_lock lock(registry_mutex_);
  sessions_.emplace(session->id, std::move(session));
  return d;
}

std::shared_ptr<SessionService::Session> SessionService::find(const std::string& session_id) const {
  std::shared_lock lock(registry_mutex_);
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) throw Error(ErrorCode::kNotFound, "no session '" + session_id + "'");
  return it->second;
}

EventResponse SessionService::post_event(const std::string& session_id, const ClientEvent& event) {
  auto session = find(session_id);
  validate_event(ScenarioEvent{event.client_ts_ms, event.action});

  std::unique_lock lock(session->mutex);
  if (session->engine.completed) {
    throw Error(ErrorCode::kConflict, "session '" + session_id + "' is completed");
  }
  const auto& last = session->engine.last_timestamp_ms;
  if (last && event.client_ts_ms < *last) {
    throw Error(ErrorCode::kInvalidInput, "event timestamp " + std::to_string(event.client_ts_ms) +
                                              " precedes " + std::to_string(*last));
  }

  auto world = session->world_events;
  world.push_back({event.client_ts_ms, event.action});
  const WorkspaceHistory history(world);
  const FramePair frames = observe_world(*session->plan, history, event.client_ts_ms);
  StepResult stepped = step(session->engine, frames.leading, frames.auxiliary);
  session->world_events = std::move(world);
  session->log.push_back(event);

  EventResponse response;
  response.seq = static_cast<std::int64_t>(session->records.size()) + 1;
  response.messages = std::move(stepped.messages);
  response.transition = stepped.transition;
  response.snapshot = session->snapshot();

  json payload = event_response_to_json(response);
  payload["client_ts_ms"] = event.client_ts_ms;
  session->records.push_back({response.seq, std::move(payload)});
  lock.unlock();
  session->changed.notify_all();
  return response;
}

SessionDescriptor SessionService::get_state(const std::string& session_id) const {
  auto session = find(session_id);
  std::lock_guard lock(session->mutex);
  return session->descriptor();
}

std::string SessionService::export_timeline(const std::string& session_id) const {
  auto session = find(session_id);
  std::lock_guard lock(session->mutex);
  if (!session->engine.completed) {
    throw Error(ErrorCode::kConflict, "session '" + session_id + "' is not completed");
  }
  const SessionResult result = to_session_result(session->engine);
  Timeline t = *result.predicted;
  t.run_id = session->id;
  t.cohort = "live";
  return timelines_to_csv(std::span<const Timeline>(&t, 1));
}

std::vector<PushRecord> SessionService::wait_records(const std::string& session_id,
                                                     std::int64_t after_seq,
                                                     std::chrono::milliseconds timeout) const {
  auto session = find(session_id);
  std::unique_lock lock(session->mutex);
  auto pending = [&] {
    return shut_down_.load() || static_cast<std::int64_t>(session->records.size()) > after_seq;
  };
  session->changed.wait_for(lock, timeout, pending);
  std::vector<PushRecord> out;
  for (auto i = std::max<std::int64_t>(after_seq, 0);
       i < static_cast<std::int64_t>(session->records.size()); ++i) {
    out.push_back(session->records[i]);
  }
  return out;
}

std::vector<ClientEvent> SessionService::event_log(const std::string& session_id) const {
  auto session = find(session_id);
  std::lock_guard lock(session->mutex);
  return session->log;
}

bool SessionService::is_completed(const std::string& session_id) const {
  auto session = find(session_id);
  std::lock_guard lock(session->mutex);
  return session->engine.completed;
}

std::shared_ptr<const AssemblyPlan> SessionService::plan_of(const std::string& session_id) const {
  return find(session_id)->plan;
}

std::size_t SessionService::session_count() const {
  std::shared_lock lock(registry_mutex_);
  return sessions_.size();
}

void SessionService::shutdown() {
  shut_down_.store(true);
  std::shared_lock lock(registry_mutex_);
  for (const auto& [_, session] : sessions_) {
    // Taking the lock orders the flag store before any waiter's predicate check.
    { std::lock_guard guard(session->mutex); }
    session->changed.notify_all();
  }
}

json snapshot_to_json(const SessionSnapshot& s) {
  json occupancy = json::array();
  for (const auto& [key, count] : s.zone_occupancy) {
    occupancy.push_back({{"zone", key.first}, {"part", key.second}, {"count", count}});
  }
  return {{"current_stage", s.current_stage},
          {"stage_count", s.stage_count},
          {"instruction", s.instruction},
          {"zone_occupancy", occupancy},
          {"completed", s.completed}};
}

json descriptor_to_json(const SessionDescriptor& d) {
  return {{"session_id", d.session_id},
          {"plan_id", d.plan_id},
          {"created_at", d.created_at_ms},
          {"state", snapshot_to_json(d.state)}};
}

json event_response_to_json(const EventResponse& r) {
  json messages = json::array();
  for (const auto& m : r.messages) messages.push_back(message_to_json(m));
  return {{"seq", r.seq},
          {"messages", messages},
          {"transition", r.transition ? transition_to_json(*r.transition) : json(nullptr)},
          {"state", snapshot_to_json(r.snapshot)}};
}

ClientEvent client_event_from_json(const json& j, const AssemblyPlan* plan) {
  using namespace json_util;
  const std::string ctx = "event";
  require_object(j, ctx);
  reject_unknown_keys(j, {"client_ts_ms", "action"}, ctx);
  return ClientEvent{integer_field(j, "client_ts_ms", ctx),
                     action_from_json(field(j, "action", ctx), plan)};
}

json client_event_to_json(const ClientEvent& e) {
  return {{"client_ts_ms", e.client_ts_ms}, {"action", action_to_json(e.action)}};
}

}  // namespace asmctl
