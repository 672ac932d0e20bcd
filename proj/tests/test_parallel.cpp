#include <doctest.h>

#include "asmctl/error.hpp"
#include "asmctl/parallel.hpp"
#include "asmctl/reference_plan.hpp"

using namespace asmctl;

TEST_CASE("cohort simulation: OpenMP kernel matches the serial reference") {
  const auto plan = reference_plan();
  const std::vector<CohortSpec> cohorts{{PaceProfile::fast(), 9}, {PaceProfile::slow(), 7}};
  const NoiseModel noise{0.2, 0.05, 11};

  for (const LagModel& lag : {LagModel{ConstantLag{500}}, LagModel{UniformJitterLag{0, 600}}}) {
    const auto par = simulate_cohorts(plan, EngineConfig{}, cohorts, lag, noise, 40);
    const auto ser = simulate_cohorts_serial(plan, EngineConfig{}, cohorts, lag, noise, 40);
    REQUIRE(par.size() == 16);
    CHECK(par == ser);
    CHECK(par[0].truth.run_id == "fast-000");
    CHECK(par[8].truth.run_id == "fast-008");
    CHECK(par[9].truth.run_id == "slow-000");
    CHECK(par[9].truth.cohort == "slow");
    for (const auto& r : par) {
      CHECK(r.predicted.run_id == r.truth.run_id);
      CHECK(r.predicted.stage_count() == 12);
    }
  }
}

TEST_CASE("cohort simulation: run k uses base seed + k") {
  const auto plan = reference_plan();
  const std::vector<CohortSpec> two{{PaceProfile::fast(), 2}};
  const auto all = simulate_cohorts(plan, EngineConfig{}, two, ConstantLag{100}, NoiseModel{}, 10);
  const std::vector<CohortSpec> one{{PaceProfile::fast(), 1}};
  const auto shifted = simulate_cohorts(plan, EngineConfig{}, one, ConstantLag{100}, NoiseModel{}, 11);
  CHECK(all[1].truth.intervals == shifted[0].truth.intervals);
  CHECK(all[1].predicted.intervals == shifted[0].predicted.intervals);
}

TEST_CASE("cohort simulation: errors propagate out of the parallel region") {
  auto plan = reference_plan();
  plan.stages[2].placements = plan.stages[0].placements;
  const std::vector<CohortSpec> cohorts{{PaceProfile::fast(), 8}};
  CHECK_THROWS_AS(simulate_cohorts(plan, EngineConfig{}, cohorts, ConstantLag{0}, NoiseModel{}, 0), Error);
  CHECK(simulate_cohorts(reference_plan(), EngineConfig{}, std::vector<CohortSpec>{}, ConstantLag{0},
                         NoiseModel{}, 0)
            .empty());
}

TEST_CASE("batch IoU: OpenMP kernel matches the serial reference") {
  const auto labels = simulate_cohorts(reference_plan(), EngineConfig{},
                                       std::vector<CohortSpec>{{PaceProfile::fast(), 20}, {PaceProfile::slow(), 20}},
                                       UniformJitterLag{100, 900}, NoiseModel{0.1, 0.0, 2}, 0);
  std::vector<Timeline> pred;
  std::vector<Timeline> truth;
  for (const auto& l : labels) {
    pred.push_back(l.predicted);
    truth.push_back(l.truth);
  }
  const auto par = batch_timeline_iou(pred, truth);
  CHECK(par == batch_timeline_iou_serial(pred, truth));
  REQUIRE(par.size() == 40);
  for (std::size_t i = 0; i < par.size(); ++i) CHECK(par[i] == timeline_iou(pred[i], truth[i]));

  std::swap(truth[0], truth[1]);
  CHECK_THROWS_AS(batch_timeline_iou(pred, truth), Error);
  truth.pop_back();
  CHECK_THROWS_AS(batch_timeline_iou(pred, truth), Error);
}
