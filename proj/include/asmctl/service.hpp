#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "asmctl/engine.hpp"
#include "asmctl/plan.hpp"
#include "asmctl/simulator.hpp"

namespace asmctl {

struct SessionSnapshot {
  int current_stage = 0;
  int stage_count = 0;
  std::string instruction;  // empty once completed
  Occupancy zone_occupancy;
  bool completed = false;

  bool operator==(const SessionSnapshot&) const = default;
};

struct SessionDescriptor {
  std::string session_id;
  std::string plan_id;
  std::int64_t created_at_ms = 0;  // wall clock, ms since the Unix epoch
  SessionSnapshot state;
};

// An operator action reported by a client, stamped with the client's clock.
struct ClientEvent {
  std::int64_t client_ts_ms = 0;
  OperatorAction action;

  bool operator==(const ClientEvent&) const = default;
};

// One entry of a session's push channel; seq starts at 1 and has no gaps.
struct PushRecord {
  std::int64_t seq = 0;
  nlohmann::json payload;
};

struct EventResponse {
  std::int64_t seq = 0;
  std::vector<OperatorMessage> messages;
  std::optional<StageTransition> transition;
  SessionSnapshot snapshot;
};

// In-memory registry of live engine sessions. Events for one session are
// applied one at a time under that session's lock; sessions never share
// engine state. Client events become zero-lag, zero-noise frame pairs.
class SessionService {
 public:
  // Throws Error(kValidation) for an invalid plan or config.
  SessionDescriptor create_session(const AssemblyPlan& plan, const EngineConfig& config = {});

  // Throws Error(kNotFound), Error(kConflict) once completed,
  // Error(kValidation) for a malformed event and Error(kInvalidInput) for a
  // timestamp earlier than the previous event's.
  EventResponse post_event(const std::string& session_id, const ClientEvent& event);

  SessionDescriptor get_state(const std::string& session_id) const;

  // Timeline CSV for the session; Error(kConflict) until completed.
  std::string export_timeline(const std::string& session_id) const;

  // Push records with seq > after_seq. Waits up to `timeout` when none are
  // pending; returns an empty vector on timeout or shutdown.
  std::vector<PushRecord> wait_records(const std::string& session_id, std::int64_t after_seq,
                                       std::chrono::milliseconds timeout) const;

  // The accepted client events in processing order.
  std::vector<ClientEvent> event_log(const std::string& session_id) const;

  bool is_completed(const std::string& session_id) const;
  std::shared_ptr<const AssemblyPlan> plan_of(const std::string& session_id) const;
  std::size_t session_count() const;

  // Wakes every waiter; subsequent waits return immediately.
  void shutdown();
  bool is_shut_down() const { return shut_down_.load(); }

 private:
  struct Session;

  std::shared_ptr<Session> find(const std::string& session_id) const;

  mutable std::shared_mutex registry_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::atomic<std::uint64_t> next_id_{1};
  std::atomic<bool> shut_down_{false};
};

nlohmann::json snapshot_to_json(const SessionSnapshot& s);
nlohmann::json descriptor_to_json(const SessionDescriptor& d);
nlohmann::json event_response_to_json(const EventResponse& r);
ClientEvent client_event_from_json(const nlohmann::json& j, const AssemblyPlan* plan = nullptr);
nlohmann::json client_event_to_json(const ClientEvent& e);

}  // namespace asmctl
