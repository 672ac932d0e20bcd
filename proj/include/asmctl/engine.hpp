#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "asmctl/geometry.hpp"
#include "asmctl/plan.hpp"
#include "asmctl/timeline.hpp"

namespace asmctl {

enum class Camera { kLeading, kAuxiliary };

std::string_view to_string(Camera camera);

// One classified box. object_class is a part id, or a tool/hand/foreign tag.
struct Detection {
  std::string object_class;
  Rect bbox;
  double confidence = 1.0;

  bool operator==(const Detection&) const = default;
};

struct ConnectionHypothesis {
  std::string connection_id;
  double probability = 0.0;
  std::string source_zone_id;

  bool operator==(const ConnectionHypothesis&) const = default;
};

struct FrameObservation {
  Camera camera = Camera::kLeading;
  std::int64_t timestamp_ms = 0;
  std::vector<Detection> detections;
  std::vector<ConnectionHypothesis> connection_hypotheses;

  bool operator==(const FrameObservation&) const = default;
};

struct FramePair {
  FrameObservation leading;
  FrameObservation auxiliary;

  bool operator==(const FramePair&) const = default;
};

namespace msg {

struct MissingDetail {
  std::string part;
  std::string zone;
  bool operator==(const MissingDetail&) const = default;
};

struct ExtraDetail {
  std::string part;
  std::string zone;
  bool operator==(const ExtraDetail&) const = default;
};

struct WrongConnection {
  std::string seen;
  std::string expected;
  bool operator==(const WrongConnection&) const = default;
};

struct StageInstruction {
  std::string text;
  bool operator==(const StageInstruction&) const = default;
};

struct ProceedNextStage {
  int new_stage_index = 0;
  bool operator==(const ProceedNextStage&) const = default;
};

}  // namespace msg

using MessageBody = std::variant<msg::MissingDetail, msg::ExtraDetail, msg::WrongConnection,
                                 msg::StageInstruction, msg::ProceedNextStage>;

struct OperatorMessage {
  std::int64_t timestamp_ms = 0;
  MessageBody body;

  template <typename T>
  bool is() const { return std::holds_alternative<T>(body); }
  bool operator==(const OperatorMessage&) const = default;
};

std::string_view message_type(const OperatorMessage& m);

struct StageTransition {
  int stage_index = 0;
  std::int64_t start_timestamp_ms = 0;

  bool operator==(const StageTransition&) const = default;
};

// (zone_id, part_id) -> count of detections assigned to that zone.
using Occupancy = std::map<std::pair<std::string, std::string>, int>;

struct PlacementShortfall {
  std::string part;
  std::string zone;
  int amount = 0;  // deficit for `missing`, surplus for `extra`

  bool operator==(const PlacementShortfall&) const = default;
};

struct PlacementStatus {
  bool satisfied = false;
  std::vector<PlacementShortfall> missing;
  std::vector<PlacementShortfall> extra;

  bool operator==(const PlacementStatus&) const = default;
};

// Each detection goes to the zone with the largest overlap fraction among
// those at or above the threshold; ties go to the smallest zone id.
Occupancy assign_to_zones(std::span<const Detection> detections, std::span<const Zone> zones,
                          double overlap_threshold);

// Multiset union of two cameras' views of the same table: per-key maximum.
Occupancy merge_occupancy(const Occupancy& a, const Occupancy& b);

PlacementStatus evaluate_occupancy(const Occupancy& occupancy, const StageSpec& stage);

PlacementStatus evaluate_placement(std::span<const Detection> detections, const StageSpec& stage,
                                   std::span<const Zone> zones, const EngineConfig& config);

// Argmax over hypotheses strictly above threshold; ties go to the smallest id.
std::optional<std::string> decide_connection_single(
    std::span<const ConnectionHypothesis> hypotheses, double threshold);

struct ConnectionDecision {
  std::optional<std::string> leading;  // the leading camera's choice, if any
  std::optional<std::string> agreed;   // set only when both cameras chose it

  bool operator==(const ConnectionDecision&) const = default;
};

// Leading camera first; the auxiliary camera is consulted only when the
// leading one is confident. When assembly_zone is given, hypotheses from
// other zones are ignored. Throws Error(kInvalidInput) on swapped roles.
ConnectionDecision decide_connection(const FrameObservation& leading,
                                     const FrameObservation& auxiliary, double threshold,
                                     std::optional<std::string_view> assembly_zone = std::nullopt);

struct EngineState {
  std::shared_ptr<const AssemblyPlan> plan;
  EngineConfig config;
  int current_stage_index = 0;
  Occupancy zone_occupancy;
  std::optional<std::string> pending_leading_connection;
  std::vector<StageTransition> transitions;
  std::vector<OperatorMessage> messages;
  bool completed = false;

  std::optional<std::int64_t> session_start_ms;
  std::optional<std::int64_t> last_timestamp_ms;

  // Feedback is edge-triggered: a status is reported when it changes.
  std::optional<PlacementStatus> last_reported_placement;
  std::optional<std::string> last_reported_wrong_connection;

  const StageSpec& current_stage() const { return plan->stages.at(current_stage_index); }
  bool operator==(const EngineState&) const = default;
};

// Validates plan and config (Error(kValidation)) and returns a stage-0 state.
EngineState make_engine_state(std::shared_ptr<const AssemblyPlan> plan, const EngineConfig& config);

struct StepResult {
  std::vector<OperatorMessage> messages;
  std::optional<StageTransition> transition;
};

// Advances the state machine by one frame pair. Throws Error(kConflict) on a
// completed state and Error(kInvalidInput) on camera-role mismatch or a
// timestamp earlier than the last processed one.
StepResult step(EngineState& state, const FrameObservation& leading,
                const FrameObservation& auxiliary);

struct SessionResult {
  std::vector<StageTransition> transitions;
  std::vector<OperatorMessage> messages;
  bool completed = false;
  std::optional<std::int64_t> session_start_ms;
  std::optional<Timeline> predicted;  // present once the plan is completed

  // Starts of every stage reached so far (stage 0 first).
  std::vector<std::int64_t> reached_stage_starts() const;
  bool operator==(const SessionResult&) const = default;
};

SessionResult to_session_result(const EngineState& state);

using FrameSource = std::function<std::optional<FramePair>()>;

// Folds step over the stream until it ends or the plan completes.
SessionResult run_session(const AssemblyPlan& plan, const EngineConfig& config,
                          std::span<const FramePair> frames);
SessionResult run_session(const AssemblyPlan& plan, const EngineConfig& config,
                          const FrameSource& next_frame);

}  // namespace asmctl
