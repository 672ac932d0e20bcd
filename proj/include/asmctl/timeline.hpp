#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace asmctl {

// Half-open interval [start_ms, end_ms) on the millisecond time axis.
struct StageInterval {
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;

  std::int64_t length() const { return end_ms - start_ms; }
  bool operator==(const StageInterval&) const = default;
};

struct Timeline {
  std::string run_id;
  std::string cohort;
  std::vector<StageInterval> intervals;  // contiguous, one per stage

  std::size_t stage_count() const { return intervals.size(); }
  std::vector<std::int64_t> stage_starts() const;
  std::int64_t completion_ms() const;

  bool operator==(const Timeline&) const = default;
};

// Per-stage temporal IoU for one run.
struct IoUVector {
  std::string run_id;
  std::vector<double> values;

  bool operator==(const IoUVector&) const = default;
};

// Overlap duration over union duration. Both empty gives 1.0, exactly one
// empty gives 0.0.
double interval_iou(const StageInterval& a, const StageInterval& b);

// interval[i] = [start_i, start_{i+1}); the last one ends at completion_ms.
// Throws Error(kInvalidInput) unless starts strictly increase and
// completion_ms exceeds the last start.
std::vector<StageInterval> timeline_from_starts(std::span<const std::int64_t> starts,
                                                std::int64_t completion_ms);

// Like timeline_from_starts but admits zero-length stages (non-decreasing
// starts, completion >= last start). Used for recorded timelines, where two
// stage boundaries can land on the same frame.
std::vector<StageInterval> contiguous_intervals(std::span<const std::int64_t> starts,
                                                std::int64_t completion_ms);

Timeline make_timeline(std::string run_id, std::string cohort,
                       std::span<const std::int64_t> starts, std::int64_t completion_ms);

// Element-wise interval_iou. Throws Error(kInvalidInput) on stage-count or
// run_id mismatch.
IoUVector timeline_iou(const Timeline& predicted, const Timeline& truth);

}  // namespace asmctl
