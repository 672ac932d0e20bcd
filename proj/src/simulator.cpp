#include "asmctl/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "asmctl/error.hpp"

namespace asmctl {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// [0, 1) with 53 random bits; independent of the standard library's
// distribution implementations.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

std::int64_t uniform_int(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<double>(hi - lo + 1);
  return std::min(hi, lo + static_cast<std::int64_t>(uniform01(rng) * span));
}

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

std::string_view to_string(Cohort cohort) { return cohort == Cohort::kFast ? "fast" : "slow"; }

PaceProfile PaceProfile::fast() { return {52000.0 / 12.0, 0.4, Cohort::kFast}; }
PaceProfile PaceProfile::slow() { return {129000.0 / 12.0, 0.2, Cohort::kSlow}; }

void validate_event(const ScenarioEvent& event) {
  if (event.at_ms < 0) throw Error(ErrorCode::kValidation, "event at_ms must be >= 0");
  if (const auto* show = std::get_if<action::ShowConnection>(&event.action)) {
    if (show->duration_ms <= 0) throw Error(ErrorCode::kValidation, "show duration_ms must be > 0");
    if (!is_probability(show->leading_prob) || !is_probability(show->aux_prob)) {
      throw Error(ErrorCode::kValidation, "show probabilities must lie in [0,1]");
    }
  }
  if (const auto* place = std::get_if<action::PlacePart>(&event.action)) {
    if (!is_valid(place->bbox)) throw Error(ErrorCode::kValidation, "place bbox is not a valid rect");
  }
}

std::int64_t max_lag_ms(const LagModel& lag) {
  return std::visit(
      [](const auto& l) -> std::int64_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(l)>, ConstantLag>) {
          return l.lag_ms;
        } else {
          return l.max_ms;
        }
      },
      lag);
}

void validate_lag(const LagModel& lag) {
  if (const auto* c = std::get_if<ConstantLag>(&lag)) {
    if (c->lag_ms < 0) throw Error(ErrorCode::kValidation, "lag must be >= 0");
  } else {
    const auto& j = std::get<UniformJitterLag>(lag);
    if (j.min_ms < 0 || j.max_ms < j.min_ms) {
      throw Error(ErrorCode::kValidation, "jitter lag needs 0 <= min <= max");
    }
  }
}

void validate_noise(const NoiseModel& noise) {
  if (!(noise.miss_rate >= 0.0 && noise.miss_rate < 1.0)) {
    throw Error(ErrorCode::kValidation, "miss_rate must be in [0,1)");
  }
  if (!(noise.false_hypothesis_rate >= 0.0 && noise.false_hypothesis_rate < 1.0)) {
    throw Error(ErrorCode::kValidation, "false_hypothesis_rate must be in [0,1)");
  }
  if (!(noise.spurious_floor >= 0.0 && noise.spurious_floor < 1.0)) {
    throw Error(ErrorCode::kValidation, "spurious_floor must be in [0,1)");
  }
}

Timeline GroundTruth::to_timeline(std::string run_id, std::string cohort) const {
  return make_timeline(std::move(run_id), std::move(cohort), stage_starts, completion_ms);
}

Rect default_bbox(const Rect& zone) {
  return Rect{zone.x + zone.w / 4.0, zone.y + zone.h / 4.0, zone.w / 2.0, zone.h / 2.0};
}

Scenario generate_scenario(const AssemblyPlan& plan, const PaceProfile& pace, std::uint64_t seed) {
  require_valid(plan);
  if (!(pace.mean_stage_duration_ms > 0.0) ||
      !(pace.jitter_fraction >= 0.0 && pace.jitter_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidInput, "pace needs a positive mean and jitter in [0,1)");
  }
  std::mt19937_64 rng(splitmix64(seed));
  const std::size_t n = plan.stage_count();

  std::vector<std::int64_t> durations(n);
  for (auto& d : durations) {
    const double jitter = pace.jitter_fraction * uniform(rng, -1.0, 1.0);
    d = std::max<std::int64_t>(1, std::llround(pace.mean_stage_duration_ms * (1.0 + jitter)));
  }

  Scenario out;
  Occupancy world;  // (zone, part) -> count already on the table
  std::int64_t t = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const StageSpec& stage = plan.stages[i];
    out.truth.stage_starts.push_back(t);
    const std::int64_t done = t + durations[i];

    if (stage.kind == StageKind::kPlacement) {
      std::vector<OperatorAction> actions;
      for (const auto& req : stage.placements) {
        int& present = world[{req.zone_id, req.part_id}];
        const Rect& zone = plan.find_zone(req.zone_id)->rect;
        for (; present < req.count; ++present) {
          const double w = zone.w * uniform(rng, 0.2, 0.4);
          const double h = zone.h * uniform(rng, 0.2, 0.4);
          const Rect bbox{zone.x + uniform01(rng) * (zone.w - w), zone.y + uniform01(rng) * (zone.h - h),
                          w, h};
          actions.push_back(action::PlacePart{req.part_id, req.zone_id, bbox});
        }
        for (; present > req.count; --present) {
          actions.push_back(action::RemovePart{req.part_id, req.zone_id});
        }
      }
      if (actions.empty()) {
        throw Error(ErrorCode::kInvalidInput,
                    "stage " + std::to_string(i) + " is already satisfied by earlier stages");
      }
      const auto k = static_cast<std::int64_t>(actions.size());
      for (std::int64_t a = 0; a < k; ++a) {
        out.events.push_back({t + durations[i] * (a + 1) / k, std::move(actions[a])});
      }
    } else {
      const std::int64_t show_for =
          i + 1 < n ? durations[i + 1]
                    : std::max<std::int64_t>(1, std::llround(pace.mean_stage_duration_ms));
      out.events.push_back({done, action::ShowConnection{stage.connection_id, show_for, 1.0, 1.0}});
    }
    t = done;
  }
  out.truth.completion_ms = t;
  std::stable_sort(out.events.begin(), out.events.end(),
                   [](const ScenarioEvent& a, const ScenarioEvent& b) { return a.at_ms < b.at_ms; });
  return out;
}

WorkspaceHistory::WorkspaceHistory(std::vector<ScenarioEvent> events) : events_(std::move(events)) {
  std::stable_sort(events_.begin(), events_.end(),
                   [](const ScenarioEvent& a, const ScenarioEvent& b) { return a.at_ms < b.at_ms; });
  versions_.emplace_back();
  for (const auto& e : events_) {
    if (const auto* place = std::get_if<action::PlacePart>(&e.action)) {
      auto next = versions_.back();
      next.push_back({place->part, place->zone, place->bbox});
      versions_.push_back(std::move(next));
      version_times_.push_back(e.at_ms);
    } else if (const auto* remove = std::get_if<action::RemovePart>(&e.action)) {
      auto next = versions_.back();
      auto it = std::find_if(next.rbegin(), next.rend(), [&](const PlacedPart& p) {
        return p.part == remove->part && p.zone == remove->zone;
      });
      if (it != next.rend()) next.erase(std::next(it).base());
      versions_.push_back(std::move(next));
      version_times_.push_back(e.at_ms);
    }
  }
}

const std::vector<WorkspaceHistory::PlacedPart>& WorkspaceHistory::parts_at(std::int64_t t) const {
  const auto idx = std::upper_bound(version_times_.begin(), version_times_.end(), t) -
                   version_times_.begin();
  return versions_[idx];
}

std::vector<WorkspaceHistory::ActiveShow> WorkspaceHistory::shows_at(std::int64_t t) const {
  std::vector<ActiveShow> out;
  for (const auto& e : events_) {
    if (e.at_ms > t) break;
    if (const auto* show = std::get_if<action::ShowConnection>(&e.action)) {
      if (t < e.at_ms + show->duration_ms) {
        out.push_back({show->connection, show->leading_prob, show->aux_prob});
      }
    }
  }
  return out;
}

std::int64_t WorkspaceHistory::last_effect_ms() const {
  std::int64_t last = 0;
  for (const auto& e : events_) {
    last = std::max(last, e.at_ms);
    if (const auto* show = std::get_if<action::ShowConnection>(&e.action)) {
      last = std::max(last, e.at_ms + show->duration_ms);
    }
  }
  return last;
}

FrameRenderer::FrameRenderer(const AssemblyPlan& plan, std::vector<ScenarioEvent> events,
                             LagModel lag, NoiseModel noise, std::int64_t frame_period_ms,
                             std::int64_t horizon_ms)
    : history_(std::move(events)),
      lag_(lag),
      noise_(noise),
      period_(frame_period_ms),
      horizon_(horizon_ms),
      rng_(splitmix64(noise.seed)) {
  validate_lag(lag_);
  validate_noise(noise_);
  if (period_ <= 0) throw Error(ErrorCode::kInvalidInput, "frame period must be positive");
  if (const Zone* z = plan.assembly_zone()) assembly_zone_ = z->id;
  for (const auto& c : plan.connections) connection_ids_.push_back(c.id);
}

std::optional<FramePair> FrameRenderer::next() {
  if (tick_ > horizon_) return std::nullopt;
  const std::int64_t tick = tick_;
  tick_ += period_;
  std::int64_t lag = 0;
  if (const auto* c = std::get_if<ConstantLag>(&lag_)) {
    lag = c->lag_ms;
  } else {
    const auto& j = std::get<UniformJitterLag>(lag_);
    lag = uniform_int(rng_, j.min_ms, j.max_ms);
  }
  FramePair pair;
  pair.leading = observe(Camera::kLeading, tick, tick - lag);
  pair.auxiliary = observe(Camera::kAuxiliary, tick, tick - lag);
  return pair;
}

FrameObservation FrameRenderer::observe(Camera camera, std::int64_t tick, std::int64_t world_time) {
  auto dropped = [&] { return noise_.miss_rate > 0.0 && uniform01(rng_) < noise_.miss_rate; };
  FrameObservation frame;
  frame.camera = camera;
  frame.timestamp_ms = tick;
  for (const auto& p : history_.parts_at(world_time)) {
    if (!dropped()) frame.detections.push_back({p.part, p.bbox, 1.0});
  }
  for (const auto& s : history_.shows_at(world_time)) {
    if (!dropped()) {
      frame.connection_hypotheses.push_back(
          {s.connection, camera == Camera::kLeading ? s.leading_prob : s.aux_prob, assembly_zone_});
    }
  }
  if (noise_.false_hypothesis_rate > 0.0 && !connection_ids_.empty() &&
      uniform01(rng_) < noise_.false_hypothesis_rate) {
    const auto pick = static_cast<std::size_t>(uniform01(rng_) * connection_ids_.size());
    const double p = noise_.spurious_floor + (1.0 - noise_.spurious_floor) * (1.0 - uniform01(rng_));
    frame.connection_hypotheses.push_back(
        {connection_ids_[std::min(pick, connection_ids_.size() - 1)], p, assembly_zone_});
  }
  return frame;
}

std::vector<FramePair> render_frames(const AssemblyPlan& plan, std::span<const ScenarioEvent> events,
                                     const LagModel& lag, const NoiseModel& noise,
                                     std::int64_t frame_period_ms, std::int64_t horizon_ms) {
  FrameRenderer renderer(plan, {events.begin(), events.end()}, lag, noise, frame_period_ms,
                         horizon_ms);
  std::vector<FramePair> out;
  while (auto pair = renderer.next()) out.push_back(std::move(*pair));
  return out;
}

std::vector<std::int64_t> SimulatedRun::padded_predicted_starts(std::size_t stage_count) const {
  std::vector<std::int64_t> starts = session.reached_stage_starts();
  if (session.completed) {
    starts.push_back(session.transitions.back().start_timestamp_ms);
  }
  const std::int64_t end = std::max(horizon_ms, starts.empty() ? 0 : starts.back());
  if (starts.empty()) starts.push_back(0);
  while (starts.size() < stage_count + 1) starts.push_back(end);
  return starts;
}

Timeline SimulatedRun::predicted_timeline(std::string run_id, std::string cohort,
                                          std::size_t stage_count) const {
  auto starts = padded_predicted_starts(stage_count);
  const std::int64_t completion = starts.back();
  starts.pop_back();
  return Timeline{std::move(run_id), std::move(cohort), contiguous_intervals(starts, completion)};
}

SimulatedRun simulate_run(const AssemblyPlan& plan, const EngineConfig& config,
                          const PaceProfile& pace, const LagModel& lag, const NoiseModel& noise,
                          std::uint64_t seed) {
  require_valid(config);
  Scenario scenario = generate_scenario(plan, pace, seed);
  SimulatedRun run;
  run.truth = std::move(scenario.truth);

  NoiseModel frame_noise = noise;
  frame_noise.seed = splitmix64(noise.seed ^ splitmix64(seed));
  const WorkspaceHistory probe(scenario.events);
  run.horizon_ms = std::max(probe.last_effect_ms(), run.truth.completion_ms) + max_lag_ms(lag) +
                   config.frame_period_ms;

  FrameRenderer renderer(plan, std::move(scenario.events), lag, frame_noise, config.frame_period_ms,
                         run.horizon_ms);
  run.session = run_session(plan, config, [&] { return renderer.next(); });
  return run;
}

FramePair observe_world(const AssemblyPlan& plan, const WorkspaceHistory& history, std::int64_t t) {
  const Zone* zone = plan.assembly_zone();
  const std::string zone_id = zone ? zone->id : std::string();
  FramePair pair;
  pair.leading.camera = Camera::kLeading;
  pair.auxiliary.camera = Camera::kAuxiliary;
  pair.leading.timestamp_ms = pair.auxiliary.timestamp_ms = t;
  for (const auto& p : history.parts_at(t)) {
    pair.leading.detections.push_back({p.part, p.bbox, 1.0});
    pair.auxiliary.detections.push_back({p.part, p.bbox, 1.0});
  }
  for (const auto& s : history.shows_at(t)) {
    pair.leading.connection_hypotheses.push_back({s.connection, s.leading_prob, zone_id});
    pair.auxiliary.connection_hypotheses.push_back({s.connection, s.aux_prob, zone_id});
  }
  return pair;
}

}  // namespace asmctl
