#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "asmctl/plan.hpp"
#include "asmctl/simulator.hpp"
#include "asmctl/timeline.hpp"

namespace asmctl {

struct CohortSpec {
  PaceProfile pace;
  int runs = 0;
};

struct RunLabels {
  Timeline truth;
  Timeline predicted;
  bool completed = false;

  bool operator==(const RunLabels&) const = default;
};

// "fast-007" etc.
std::string run_id_for(Cohort cohort, int index);

// Runs every cohort back to back; run k overall uses seed base_seed + k.
// The OpenMP kernel and the serial reference produce identical output.
std::vector<RunLabels> simulate_cohorts(const AssemblyPlan& plan, const EngineConfig& config,
                                        std::span<const CohortSpec> cohorts, const LagModel& lag,
                                        const NoiseModel& noise, std::uint64_t base_seed);
std::vector<RunLabels> simulate_cohorts_serial(const AssemblyPlan& plan, const EngineConfig& config,
                                               std::span<const CohortSpec> cohorts,
                                               const LagModel& lag, const NoiseModel& noise,
                                               std::uint64_t base_seed);

// Element-wise timeline_iou over aligned spans.
std::vector<IoUVector> batch_timeline_iou(std::span<const Timeline> predicted,
                                          std::span<const Timeline> truth);
std::vector<IoUVector> batch_timeline_iou_serial(std::span<const Timeline> predicted,
                                                 std::span<const Timeline> truth);

}  // namespace asmctl
