#include "asmctl/parallel.hpp"

#include <cstdio>
#include <exception>

#include "asmctl/error.hpp"

namespace asmctl {

std::string run_id_for(Cohort cohort, int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s-%03d", std::string(to_string(cohort)).c_str(), index);
  return buf;
}

namespace {

struct RunSlot {
  const CohortSpec* cohort;
  int index_in_cohort;
};

std::vector<RunSlot> plan_slots(std::span<const CohortSpec> cohorts) {
  std::vector<RunSlot> slots;
  for (const auto& c : cohorts) {
    if (c.runs < 0) throw Error(ErrorCode::kInvalidInput, "cohort run count must be >= 0");
    for (int i = 0; i < c.runs; ++i) slots.push_back({&c, i});
  }
  return slots;
}

RunLabels label_run(const AssemblyPlan& plan, const EngineConfig& config, const RunSlot& slot,
                    const LagModel& lag, const NoiseModel& noise, std::uint64_t seed) {
  const SimulatedRun run = simulate_run(plan, config, slot.cohort->pace, lag, noise, seed);
  const std::string id = run_id_for(slot.cohort->pace.cohort, slot.index_in_cohort);
  const std::string cohort(to_string(slot.cohort->pace.cohort));
  return RunLabels{run.truth.to_timeline(id, cohort),
                   run.predicted_timeline(id, cohort, plan.stage_count()),
                   run.session.completed};
}

void check_aligned(std::span<const Timeline> predicted, std::span<const Timeline> truth) {
  if (predicted.size() != truth.size()) {
    throw Error(ErrorCode::kInvalidInput, "predicted and truth batches differ in size");
  }
}

}  // namespace

std::vector<RunLabels> simulate_cohorts(const AssemblyPlan& plan, const EngineConfig& config,
                                        std::span<const CohortSpec> cohorts, const LagModel& lag,
                                        const NoiseModel& noise, std::uint64_t base_seed) {
  require_valid(plan);
  const auto slots = plan_slots(cohorts);
  std::vector<RunLabels> out(slots.size());
  std::exception_ptr failure;
  const auto n = static_cast<std::int64_t>(slots.size());

#pragma omp parallel for schedule(dynamic)
  for (std::int64_t k = 0; k < n; ++k) {
    try {
      out[k] = label_run(plan, config, slots[k], lag, noise, base_seed + static_cast<std::uint64_t>(k));
    } catch (...) {
#pragma omp critical(asmctl_cohort_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::vector<RunLabels> simulate_cohorts_serial(const AssemblyPlan& plan, const EngineConfig& config,
                                               std::span<const CohortSpec> cohorts,
                                               const LagModel& lag, const NoiseModel& noise,
                                               std::uint64_t base_seed) {
  require_valid(plan);
  const auto slots = plan_slots(cohorts);
  std::vector<RunLabels> out;
  out.reserve(slots.size());
  for (std::size_t k = 0; k < slots.size(); ++k) {
    out.push_back(label_run(plan, config, slots[k], lag, noise, base_seed + k));
  }
  return out;
}

std::vector<IoUVector> batch_timeline_iou(std::span<const Timeline> predicted,
                                          std::span<const Timeline> truth) {
  check_aligned(predicted, truth);
  std::vector<IoUVector> out(truth.size());
  std::exception_ptr failure;
  const auto n = static_cast<std::int64_t>(truth.size());

#pragma omp parallel for
  for (std::int64_t k = 0; k < n; ++k) {
    try {
      out[k] = timeline_iou(predicted[k], truth[k]);
    } catch (...) {
#pragma omp critical(asmctl_iou_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::vector<IoUVector> batch_timeline_iou_serial(std::span<const Timeline> predicted,
                                                 std::span<const Timeline> truth) {
  check_aligned(predicted, truth);
  std::vector<IoUVector> out;
  out.reserve(truth.size());
  for (std::size_t k = 0; k < truth.size(); ++k) out.push_back(timeline_iou(predicted[k], truth[k]));
  return out;
}

}  // namespace asmctl
