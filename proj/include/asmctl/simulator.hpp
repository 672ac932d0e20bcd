#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "asmctl/engine.hpp"
#include "asmctl/plan.hpp"
#include "asmctl/timeline.hpp"

namespace asmctl {

namespace action {

struct PlacePart {
  std::string part;
  std::string zone;
  Rect bbox;
  bool operator==(const PlacePart&) const = default;
};

struct RemovePart {
  std::string part;
  std::string zone;
  bool operator==(const RemovePart&) const = default;
};

struct ShowConnection {
  std::string connection;
  std::int64_t duration_ms = 1;
  double leading_prob = 1.0;
  double aux_prob = 1.0;
  bool operator==(const ShowConnection&) const = default;
};

}  // namespace action

using OperatorAction = std::variant<action::PlacePart, action::RemovePart, action::ShowConnection>;

struct ScenarioEvent {
  std::int64_t at_ms = 0;
  OperatorAction action;

  bool operator==(const ScenarioEvent&) const = default;
};

// Throws Error(kValidation) when a timestamp, probability or duration is out
// of range.
void validate_event(const ScenarioEvent& event);

enum class Cohort { kFast, kSlow };

std::string_view to_string(Cohort cohort);

struct PaceProfile {
  double mean_stage_duration_ms = 1000.0;
  double jitter_fraction = 0.0;  // stage duration ~ mean * (1 + jitter * U(-1, 1))
  Cohort cohort = Cohort::kFast;

  // 52 s and 129 s per 12-stage assembly.
  static PaceProfile fast();
  static PaceProfile slow();
};

struct ConstantLag {
  std::int64_t lag_ms = 0;
};

struct UniformJitterLag {
  std::int64_t min_ms = 0;
  std::int64_t max_ms = 0;
};

using LagModel = std::variant<ConstantLag, UniformJitterLag>;

std::int64_t max_lag_ms(const LagModel& lag);
void validate_lag(const LagModel& lag);

struct NoiseModel {
  double miss_rate = 0.0;
  double false_hypothesis_rate = 0.0;
  std::uint64_t seed = 0;
  // Spurious hypotheses draw their probability from (spurious_floor, 1].
  double spurious_floor = 0.6;
};

void validate_noise(const NoiseModel& noise);

struct GroundTruth {
  std::vector<std::int64_t> stage_starts;
  std::int64_t completion_ms = 0;

  Timeline to_timeline(std::string run_id, std::string cohort) const;
  bool operator==(const GroundTruth&) const = default;
};

struct Scenario {
  std::vector<ScenarioEvent> events;  // sorted by at_ms
  GroundTruth truth;

  bool operator==(const Scenario&) const = default;
};

// Minimal operator script for the plan: each stage's placements are spread
// across the stage and the last one lands exactly at the next stage's true
// start; connection stages show the required connection at probability 1.0
// from the next stage's true start until the stage after it begins.
// Zones are expected not to overlap. Throws Error(kInvalidInput) if a
// placement stage is already satisfied by earlier stages.
Scenario generate_scenario(const AssemblyPlan& plan, const PaceProfile& pace, std::uint64_t seed);

// The world as the cameras would see it at any instant: placed parts and
// active connection demonstrations, rebuilt from the event list.
class WorkspaceHistory {
 public:
  struct PlacedPart {
    std::string part;
    std::string zone;
    Rect bbox;
    bool operator==(const PlacedPart&) const = default;
  };
  struct ActiveShow {
    std::string connection;
    double leading_prob = 0.0;
    double aux_prob = 0.0;
  };

  explicit WorkspaceHistory(std::vector<ScenarioEvent> events);

  // Parts on the table after all events with at_ms <= t.
  const std::vector<PlacedPart>& parts_at(std::int64_t t) const;
  std::vector<ActiveShow> shows_at(std::int64_t t) const;
  // End of the last event's visible effect.
  std::int64_t last_effect_ms() const;

 private:
  std::vector<ScenarioEvent> events_;
  std::vector<std::int64_t> version_times_;
  std::vector<std::vector<PlacedPart>> versions_;  // versions_[0] is the empty table
};

// Streams paired camera frames at tick = 0, period, 2*period, ... <= horizon.
// Each tick sees the world at (tick - lag sample); detections and hypotheses
// drop per camera with miss_rate and each camera gains a spurious hypothesis
// with false_hypothesis_rate.
class FrameRenderer {
 public:
  FrameRenderer(const AssemblyPlan& plan, std::vector<ScenarioEvent> events, LagModel lag,
                NoiseModel noise, std::int64_t frame_period_ms, std::int64_t horizon_ms);

  std::optional<FramePair> next();

 private:
  FrameObservation observe(Camera camera, std::int64_t tick, std::int64_t world_time);

  WorkspaceHistory history_;
  std::string assembly_zone_;
  std::vector<std::string> connection_ids_;
  LagModel lag_;
  NoiseModel noise_;
  std::int64_t period_;
  std::int64_t horizon_;
  std::int64_t tick_ = 0;
  std::mt19937_64 rng_;
};

std::vector<FramePair> render_frames(const AssemblyPlan& plan, std::span<const ScenarioEvent> events,
                                     const LagModel& lag, const NoiseModel& noise,
                                     std::int64_t frame_period_ms, std::int64_t horizon_ms);

struct SimulatedRun {
  GroundTruth truth;
  SessionResult session;
  std::int64_t horizon_ms = 0;

  // Recorded stage starts; stages the engine never reached (and the
  // completion of an unfinished run) are pinned to the end of observation.
  std::vector<std::int64_t> padded_predicted_starts(std::size_t stage_count) const;
  Timeline predicted_timeline(std::string run_id, std::string cohort, std::size_t stage_count) const;
};

// generate_scenario -> FrameRenderer -> run_session. The frame stream's
// noise seed is derived from both noise.seed and seed.
SimulatedRun simulate_run(const AssemblyPlan& plan, const EngineConfig& config,
                          const PaceProfile& pace, const LagModel& lag, const NoiseModel& noise,
                          std::uint64_t seed);

// Zero-lag, zero-noise frame pair showing the world at t.
FramePair observe_world(const AssemblyPlan& plan, const WorkspaceHistory& history, std::int64_t t);

// Bbox centred in the zone at half its size.
Rect default_bbox(const Rect& zone);

}  // namespace asmctl
