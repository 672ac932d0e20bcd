#include <doctest.h>

#include "asmctl/error.hpp"
#include "asmctl/reference_plan.hpp"
#include "asmctl/scenario_io.hpp"
#include "asmctl/simulator.hpp"

using namespace asmctl;

namespace {

const AssemblyPlan& plan() {
  static const AssemblyPlan p = reference_plan();
  return p;
}

double mean_duration(const GroundTruth& gt) {
  return static_cast<double>(gt.completion_ms - gt.stage_starts.front()) /
         static_cast<double>(gt.stage_starts.size());
}

bool sees_part(const FrameObservation& f, const std::string& part) {
  for (const auto& d : f.detections) {
    if (d.object_class == part) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("generate_scenario") {
  SUBCASE("deterministic per seed") {
    CHECK(generate_scenario(plan(), PaceProfile::fast(), 9) == generate_scenario(plan(), PaceProfile::fast(), 9));
    CHECK_FALSE(generate_scenario(plan(), PaceProfile::fast(), 9) ==
                generate_scenario(plan(), PaceProfile::fast(), 10));
  }
  SUBCASE("cohort paces average to the profile means") {
    double fast = 0.0;
    double slow = 0.0;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      fast += mean_duration(generate_scenario(plan(), PaceProfile::fast(), seed).truth);
      slow += mean_duration(generate_scenario(plan(), PaceProfile::slow(), seed).truth);
    }
    // Mean of 360 draws each; 5% covers the jitter comfortably.
    CHECK(fast / 30 == doctest::Approx(52000.0 / 12).epsilon(0.05));
    CHECK(slow / 30 == doctest::Approx(10750.0).epsilon(0.05));
  }
  SUBCASE("ground truth strictly increases and events are minimal") {
    const auto sc = generate_scenario(plan(), PaceProfile::fast(), 1);
    REQUIRE(sc.truth.stage_starts.size() == 12);
    CHECK(sc.truth.stage_starts.front() == 0);
    for (std::size_t i = 1; i < 12; ++i) CHECK(sc.truth.stage_starts[i] > sc.truth.stage_starts[i - 1]);
    CHECK(sc.truth.completion_ms > sc.truth.stage_starts.back());
    // 7 parts placed, 6 connections shown.
    CHECK(sc.events.size() == 13);
    for (std::size_t i = 1; i < sc.events.size(); ++i) CHECK(sc.events[i].at_ms >= sc.events[i - 1].at_ms);
    // Every placed bbox lies fully inside its zone.
    for (const auto& e : sc.events) {
      if (const auto* p = std::get_if<action::PlacePart>(&e.action)) {
        CHECK(contains(plan().find_zone(p->zone)->rect, p->bbox));
      }
    }
  }
  SUBCASE("fixed-duration pace") {
    const auto sc = generate_scenario(plan(), PaceProfile{10000.0, 0.0, Cohort::kSlow}, 3);
    for (std::size_t i = 0; i < 12; ++i) CHECK(sc.truth.stage_starts[i] == static_cast<std::int64_t>(i) * 10000);
    CHECK(sc.truth.completion_ms == 120000);
  }
  SUBCASE("a stage satisfied by earlier placements cannot be scripted") {
    AssemblyPlan p = plan();
    p.stages[2].placements = p.stages[0].placements;
    CHECK_THROWS_AS(generate_scenario(p, PaceProfile::fast(), 0), Error);
  }
}

TEST_CASE("render_frames") {
  const std::vector<ScenarioEvent> events{
      {1000, action::PlacePart{"housing", "assembly", Rect{0.4, 0.3, 0.1, 0.1}}},
      {2000, action::ShowConnection{"shaft_housing", 500, 0.9, 0.8}},
      {3050, action::RemovePart{"housing", "assembly"}},
  };

  SUBCASE("zero lag, zero noise: the first frame at or after an event reflects it") {
    const auto frames = render_frames(plan(), events, ConstantLag{0}, NoiseModel{}, 100, 4000);
    CHECK(frames.size() == 41);
    CHECK_FALSE(sees_part(frames[9].leading, "housing"));
    CHECK(sees_part(frames[10].leading, "housing"));
    CHECK(sees_part(frames[10].auxiliary, "housing"));
    CHECK(frames[20].leading.connection_hypotheses.size() == 1);
    CHECK(frames[20].leading.connection_hypotheses[0].probability == 0.9);
    CHECK(frames[20].auxiliary.connection_hypotheses[0].probability == 0.8);
    CHECK(frames[20].leading.connection_hypotheses[0].source_zone_id == "assembly");
    CHECK(frames[25].leading.connection_hypotheses.empty());  // show is half-open
    CHECK(sees_part(frames[30].leading, "housing"));
    CHECK_FALSE(sees_part(frames[31].leading, "housing"));  // removed at 3050
  }
  SUBCASE("constant lag shows the world exactly that late") {
    const auto frames = render_frames(plan(), events, ConstantLag{500}, NoiseModel{}, 100, 4000);
    CHECK_FALSE(sees_part(frames[14].leading, "housing"));
    CHECK(sees_part(frames[15].leading, "housing"));
    CHECK(frames[15].leading.timestamp_ms == 1500);
  }
  SUBCASE("seeded miss noise is reproducible") {
    NoiseModel noise{0.5, 0.0, 77};
    const auto a = render_frames(plan(), events, ConstantLag{0}, noise, 100, 4000);
    const auto b = render_frames(plan(), events, ConstantLag{0}, noise, 100, 4000);
    CHECK(a == b);
    int dropped = 0;
    for (std::size_t i = 10; i <= 30; ++i) dropped += sees_part(a[i].leading, "housing") ? 0 : 1;
    CHECK(dropped > 0);
    CHECK(dropped < 21);
    noise.seed = 78;
    CHECK_FALSE(render_frames(plan(), events, ConstantLag{0}, noise, 100, 4000) == a);
  }
  SUBCASE("spurious hypotheses are above the floor and in the assembly zone") {
    NoiseModel noise{0.0, 0.5, 5, 0.6};
    int spurious = 0;
    for (const auto& f : render_frames(plan(), {}, ConstantLag{0}, noise, 100, 10000)) {
      for (const auto* frame : {&f.leading, &f.auxiliary}) {
        for (const auto& h : frame->connection_hypotheses) {
          ++spurious;
          CHECK(h.probability > 0.6);
          CHECK(h.probability <= 1.0);
          CHECK(h.source_zone_id == "assembly");
          CHECK(plan().has_connection(h.connection_id));
        }
      }
    }
    CHECK(spurious > 50);
  }
  SUBCASE("jitter lag stays inside its bounds") {
    const auto frames = render_frames(plan(), events, UniformJitterLag{200, 400}, NoiseModel{0, 0, 3}, 100, 4000);
    CHECK_FALSE(sees_part(frames[11].leading, "housing"));  // world at <= 1000 - 200 - 100
    CHECK(sees_part(frames[14].leading, "housing"));        // world at >= 1400 - 400
  }
}

TEST_CASE("simulate_run") {
  const EngineConfig fine{0.7, 0.6, 1};

  SUBCASE("constant lag shifts every recorded stage start by the lag") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const auto run = simulate_run(plan(), fine, PaceProfile::fast(), ConstantLag{700}, NoiseModel{}, seed);
      REQUIRE(run.session.completed);
      const auto starts = run.padded_predicted_starts(12);
      CHECK(starts.front() == 0);
      for (std::size_t i = 1; i < 12; ++i) CHECK(starts[i] == run.truth.stage_starts[i] + 700);
      CHECK(starts[12] == run.truth.completion_ms + 700);
    }
  }
  SUBCASE("zero lag reproduces the truth within one frame") {
    const EngineConfig coarse{0.7, 0.6, 100};
    const auto run = simulate_run(plan(), coarse, PaceProfile::slow(), ConstantLag{0}, NoiseModel{}, 5);
    REQUIRE(run.session.completed);
    const auto pred = run.predicted_timeline("r", "slow", 12);
    const auto truth = run.truth.to_timeline("r", "slow");
    for (std::size_t i = 0; i < 12; ++i) {
      CHECK(pred.intervals[i].start_ms >= truth.intervals[i].start_ms);
      CHECK(pred.intervals[i].start_ms - truth.intervals[i].start_ms < 100);
      // Quantisation of at most one frame at each end.
      CHECK(interval_iou(pred.intervals[i], truth.intervals[i]) >=
            static_cast<double>(truth.intervals[i].length() - 100) / (truth.intervals[i].length() + 100));
    }
  }
  SUBCASE("missed detections only delay transitions") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto clean = simulate_run(plan(), EngineConfig{}, PaceProfile::fast(), ConstantLag{300}, NoiseModel{}, seed);
      const auto noisy = simulate_run(plan(), EngineConfig{}, PaceProfile::fast(), ConstantLag{300},
                                      NoiseModel{0.4, 0.0, 99}, seed);
      CHECK(clean.truth == noisy.truth);
      const auto a = clean.padded_predicted_starts(12);
      const auto b = noisy.padded_predicted_starts(12);
      for (std::size_t i = 0; i < a.size(); ++i) CHECK(b[i] >= a[i]);
    }
  }
  SUBCASE("an unfinished run pads missing stages to the end of observation") {
    // Nearly every detection dropped: the run may not finish inside the horizon.
    const auto run = simulate_run(plan(), EngineConfig{}, PaceProfile::fast(), ConstantLag{0},
                                  NoiseModel{0.97, 0.0, 1}, 0);
    if (!run.session.completed) {
      const auto pred = run.predicted_timeline("r", "fast", 12);
      CHECK(pred.stage_count() == 12);
      CHECK(pred.completion_ms() == run.horizon_ms);
    }
  }
}

TEST_CASE("scenario JSON") {
  const auto sc = generate_scenario(plan(), PaceProfile::fast(), 4);
  CHECK(scenario_from_json(scenario_to_json(sc.events)) == sc.events);

  SUBCASE("bbox defaults to the zone centre when a plan is given") {
    const auto doc = nlohmann::json::parse(
        R"([{"at_ms": 5, "action": {"type": "place_part", "part": "gear", "zone": "assembly"}}])");
    const auto events = scenario_from_json(doc, &plan());
    CHECK(std::get<action::PlacePart>(events[0].action).bbox == default_bbox(plan().zones[0].rect));
    CHECK_THROWS_AS(scenario_from_json(doc), Error);
  }
  SUBCASE("invalid events are rejected") {
    CHECK_THROWS_AS(scenario_from_json(nlohmann::json::parse(R"({"at_ms": 1})")), Error);
    CHECK_THROWS_AS(scenario_from_json(nlohmann::json::parse(
                        R"([{"at_ms": -1, "action": {"type": "remove_part", "part": "a", "zone": "b"}}])")),
                    Error);
    CHECK_THROWS_AS(scenario_from_json(nlohmann::json::parse(
                        R"([{"at_ms": 1, "action": {"type": "show_connection", "connection": "c", "leading_prob": 1.5}}])")),
                    Error);
    CHECK_THROWS_AS(scenario_from_json(nlohmann::json::parse(R"([{"at_ms": 1, "action": {"type": "juggle"}}])")),
                    Error);
  }
}
