#include "asmctl/engine.hpp"

#include <algorithm>

#include "asmctl/error.hpp"

namespace asmctl {

std::string_view to_string(Camera camera) {
  return camera == Camera::kLeading ? "leading" : "auxiliary";
}

std::string_view message_type(const OperatorMessage& m) {
  struct Visitor {
    std::string_view operator()(const msg::MissingDetail&) const { return "missing_detail"; }
    std::string_view operator()(const msg::ExtraDetail&) const { return "extra_detail"; }
    std::string_view operator()(const msg::WrongConnection&) const { return "wrong_connection"; }
    std::string_view operator()(const msg::StageInstruction&) const { return "stage_instruction"; }
    std::string_view operator()(const msg::ProceedNextStage&) const { return "proceed_next_stage"; }
  };
  return std::visit(Visitor{}, m.body);
}

Occupancy assign_to_zones(std::span<const Detection> detections, std::span<const Zone> zones,
                          double overlap_threshold) {
  Occupancy occ;
  for (const auto& det : detections) {
    const Zone* best = nullptr;
    double best_fraction = 0.0;
    for (const auto& zone : zones) {
      const double f = zone_overlap_fraction(det.bbox, zone.rect);
      if (f < overlap_threshold) continue;
      if (best == nullptr || f > best_fraction || (f == best_fraction && zone.id < best->id)) {
        best = &zone;
        best_fraction = f;
      }
    }
    if (best != nullptr) ++occ[{best->id, det.object_class}];
  }
  return occ;
}

Occupancy merge_occupancy(const Occupancy& a, const Occupancy& b) {
  Occupancy out = a;
  for (const auto& [key, count] : b) {
    int& slot = out[key];
    slot = std::max(slot, count);
  }
  return out;
}

PlacementStatus evaluate_occupancy(const Occupancy& occupancy, const StageSpec& stage) {
  PlacementStatus status;
  for (const auto& req : stage.placements) {
    auto it = occupancy.find({req.zone_id, req.part_id});
    const int seen = it == occupancy.end() ? 0 : it->second;
    if (seen < req.count) status.missing.push_back({req.part_id, req.zone_id, req.count - seen});
    if (seen > req.count) status.extra.push_back({req.part_id, req.zone_id, seen - req.count});
  }
  status.satisfied = status.missing.empty() && status.extra.empty();
  return status;
}

PlacementStatus evaluate_placement(std::span<const Detection> detections, const StageSpec& stage,
                                   std::span<const Zone> zones, const EngineConfig& config) {
  return evaluate_occupancy(assign_to_zones(detections, zones, config.overlap_threshold), stage);
}

std::optional<std::string> decide_connection_single(
    std::span<const ConnectionHypothesis> hypotheses, double threshold) {
  const ConnectionHypothesis* best = nullptr;
  for (const auto& h : hypotheses) {
    if (!(h.probability > threshold)) continue;
    if (best == nullptr || h.probability > best->probability ||
        (h.probability == best->probability && h.connection_id < best->connection_id)) {
      best = &h;
    }
  }
  if (best == nullptr) return std::nullopt;
  return best->connection_id;
}

namespace {

std::optional<std::string> decide_for_frame(const FrameObservation& frame, double threshold,
                                            std::optional<std::string_view> zone) {
  if (!zone) return decide_connection_single(frame.connection_hypotheses, threshold);
  std::vector<ConnectionHypothesis> in_zone;
  for (const auto& h : frame.connection_hypotheses) {
    if (h.source_zone_id == *zone) in_zone.push_back(h);
  }
  return decide_connection_single(in_zone, threshold);
}

}  // namespace

ConnectionDecision decide_connection(const FrameObservation& leading,
                                     const FrameObservation& auxiliary, double threshold,
                                     std::optional<std::string_view> assembly_zone) {
  if (leading.camera != Camera::kLeading || auxiliary.camera != Camera::kAuxiliary) {
    throw Error(ErrorCode::kInvalidInput, "decide_connection expects (leading, auxiliary) frames");
  }
  ConnectionDecision decision;
  decision.leading = decide_for_frame(leading, threshold, assembly_zone);
  if (!decision.leading) return decision;
  auto aux = decide_for_frame(auxiliary, threshold, assembly_zone);
  if (aux && *aux == *decision.leading) decision.agreed = std::move(aux);
  return decision;
}

EngineState make_engine_state(std::shared_ptr<const AssemblyPlan> plan, const EngineConfig& config) {
  if (!plan) throw Error(ErrorCode::kInvalidInput, "engine needs a plan");
  require_valid(*plan);
  require_valid(config);
  EngineState state;
  state.plan = std::move(plan);
  state.config = config;
  return state;
}

namespace {

// Parts only; hands, tools and foreign objects are carried but gate nothing.
std::vector<Detection> part_detections(const AssemblyPlan& plan, const FrameObservation& frame) {
  std::vector<Detection> out;
  out.reserve(frame.detections.size());
  for (const auto& d : frame.detections) {
    if (plan.has_part(d.object_class)) out.push_back(d);
  }
  return out;
}

}  // namespace

StepResult step(EngineState& state, const FrameObservation& leading,
                const FrameObservation& auxiliary) {
  if (state.completed) throw Error(ErrorCode::kConflict, "session already completed");
  if (leading.camera != Camera::kLeading || auxiliary.camera != Camera::kAuxiliary) {
    throw Error(ErrorCode::kInvalidInput, "step expects (leading, auxiliary) frames");
  }
  if (leading.timestamp_ms < 0 || auxiliary.timestamp_ms < 0) {
    throw Error(ErrorCode::kInvalidInput, "frame timestamps must be non-negative");
  }
  if (state.last_timestamp_ms &&
      (leading.timestamp_ms < *state.last_timestamp_ms ||
       auxiliary.timestamp_ms < *state.last_timestamp_ms)) {
    throw Error(ErrorCode::kInvalidInput,
                "frame timestamp " + std::to_string(leading.timestamp_ms) +
                    " precedes last processed " + std::to_string(*state.last_timestamp_ms));
  }
  const AssemblyPlan& plan = *state.plan;
  const std::int64_t ts = leading.timestamp_ms;
  state.last_timestamp_ms = std::max(leading.timestamp_ms, auxiliary.timestamp_ms);

  StepResult result;
  auto emit = [&](MessageBody body) {
    OperatorMessage m{ts, std::move(body)};
    state.messages.push_back(m);
    result.messages.push_back(std::move(m));
  };

  if (!state.session_start_ms) {
    state.session_start_ms = ts;
    emit(msg::StageInstruction{state.current_stage().instruction});
  }

  const double overlap = state.config.overlap_threshold;
  state.zone_occupancy =
      merge_occupancy(assign_to_zones(part_detections(plan, leading), plan.zones, overlap),
                      assign_to_zones(part_detections(plan, auxiliary), plan.zones, overlap));

  const StageSpec& stage = state.current_stage();
  bool advance = false;
  if (stage.kind == StageKind::kPlacement) {
    state.pending_leading_connection.reset();
    PlacementStatus status = evaluate_occupancy(state.zone_occupancy, stage);
    if (status.satisfied) {
      advance = true;
    } else if (status != state.last_reported_placement) {
      for (const auto& m : status.missing) emit(msg::MissingDetail{m.part, m.zone});
      for (const auto& e : status.extra) emit(msg::ExtraDetail{e.part, e.zone});
      state.last_reported_placement = std::move(status);
    }
  } else {
    const Zone* zone = plan.assembly_zone();
    ConnectionDecision decision = decide_connection(
        leading, auxiliary, state.config.connection_threshold,
        zone ? std::optional<std::string_view>(zone->id) : std::nullopt);
    state.pending_leading_connection = decision.leading;
    if (decision.agreed && *decision.agreed == stage.connection_id) {
      advance = true;
    } else if (decision.agreed) {
      if (decision.agreed != state.last_reported_wrong_connection) {
        emit(msg::WrongConnection{*decision.agreed, stage.connection_id});
        state.last_reported_wrong_connection = decision.agreed;
      }
    } else {
      state.last_reported_wrong_connection.reset();
    }
  }

  if (advance) {
    const int next = state.current_stage_index + 1;
    StageTransition t{next, ts};
    state.transitions.push_back(t);
    result.transition = t;
    state.current_stage_index = next;
    state.last_reported_placement.reset();
    state.last_reported_wrong_connection.reset();
    state.pending_leading_connection.reset();
    emit(msg::ProceedNextStage{next});
    if (static_cast<std::size_t>(next) == plan.stage_count()) {
      state.completed = true;
    } else {
      emit(msg::StageInstruction{plan.stages[next].instruction});
    }
  }
  return result;
}

std::vector<std::int64_t> SessionResult::reached_stage_starts() const {
  std::vector<std::int64_t> starts;
  if (!session_start_ms) return starts;
  starts.push_back(*session_start_ms);
  for (const auto& t : transitions) starts.push_back(t.start_timestamp_ms);
  // The last transition of a completed session marks completion, not a start.
  if (completed) starts.pop_back();
  return starts;
}

SessionResult to_session_result(const EngineState& state) {
  SessionResult r;
  r.transitions = state.transitions;
  r.messages = state.messages;
  r.completed = state.completed;
  r.session_start_ms = state.session_start_ms;
  if (state.completed) {
    const auto starts = r.reached_stage_starts();
    r.predicted = Timeline{"", "", contiguous_intervals(starts, state.transitions.back().start_timestamp_ms)};
  }
  return r;
}

SessionResult run_session(const AssemblyPlan& plan, const EngineConfig& config,
                          std::span<const FramePair> frames) {
  std::size_t i = 0;
  return run_session(plan, config, [&]() -> std::optional<FramePair> {
    if (i == frames.size()) return std::nullopt;
    return frames[i++];
  });
}

SessionResult run_session(const AssemblyPlan& plan, const EngineConfig& config,
                          const FrameSource& next_frame) {
  EngineState state = make_engine_state(std::make_shared<const AssemblyPlan>(plan), config);
  while (!state.completed) {
    auto pair = next_frame();
    if (!pair) break;
    step(state, pair->leading, pair->auxiliary);
  }
  return to_session_result(state);
}

}  // namespace asmctl
