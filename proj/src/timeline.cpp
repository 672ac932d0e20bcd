#include "asmctl/timeline.hpp"

#include <algorithm>

#include "asmctl/error.hpp"

namespace asmctl {

std::vector<std::int64_t> Timeline::stage_starts() const {
  std::vector<std::int64_t> out;
  out.reserve(intervals.size());
  for (const auto& iv : intervals) out.push_back(iv.start_ms);
  return out;
}

std::int64_t Timeline::completion_ms() const {
  return intervals.empty() ? 0 : intervals.back().end_ms;
}

double interval_iou(const StageInterval& a, const StageInterval& b) {
  const std::int64_t overlap =
      std::max<std::int64_t>(0, std::min(a.end_ms, b.end_ms) - std::max(a.start_ms, b.start_ms));
  const std::int64_t uni = a.length() + b.length() - overlap;
  if (uni == 0) return 1.0;
  if (a.length() == 0 || b.length() == 0) return 0.0;
  return static_cast<double>(overlap) / static_cast<double>(uni);
}

std::vector<StageInterval> timeline_from_starts(std::span<const std::int64_t> starts,
                                                std::int64_t completion_ms) {
  if (starts.empty()) throw Error(ErrorCode::kInvalidInput, "timeline needs at least one stage start");
  std::vector<StageInterval> out;
  out.reserve(starts.size());
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const std::int64_t end = i + 1 < starts.size() ? starts[i + 1] : completion_ms;
    if (end <= starts[i]) {
      throw Error(ErrorCode::kInvalidInput,
                  i + 1 < starts.size()
                      ? "stage starts must strictly increase (stage " + std::to_string(i + 1) + ")"
                      : "completion must come after the last stage start");
    }
    out.push_back({starts[i], end});
  }
  return out;
}

std::vector<StageInterval> contiguous_intervals(std::span<const std::int64_t> starts,
                                                std::int64_t completion_ms) {
  if (starts.empty()) throw Error(ErrorCode::kInvalidInput, "timeline needs at least one stage start");
  std::vector<StageInterval> out;
  out.reserve(starts.size());
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const std::int64_t end = i + 1 < starts.size() ? starts[i + 1] : completion_ms;
    if (end < starts[i]) {
      throw Error(ErrorCode::kInvalidInput,
                  "stage boundaries go backwards at stage " + std::to_string(i + 1));
    }
    out.push_back({starts[i], end});
  }
  return out;
}

Timeline make_timeline(std::string run_id, std::string cohort,
                       std::span<const std::int64_t> starts, std::int64_t completion_ms) {
  return Timeline{std::move(run_id), std::move(cohort), timeline_from_starts(starts, completion_ms)};
}

IoUVector timeline_iou(const Timeline& predicted, const Timeline& truth) {
  if (predicted.run_id != truth.run_id) {
    throw Error(ErrorCode::kInvalidInput,
                "run_id mismatch: '" + predicted.run_id + "' vs '" + truth.run_id + "'");
  }
  if (predicted.stage_count() != truth.stage_count()) {
    throw Error(ErrorCode::kInvalidInput,
                "run '" + truth.run_id + "': predicted has " +
                    std::to_string(predicted.stage_count()) + " stages, truth has " +
                    std::to_string(truth.stage_count()));
  }
  IoUVector out{truth.run_id, {}};
  out.values.reserve(truth.stage_count());
  for (std::size_t i = 0; i < truth.stage_count(); ++i) {
    out.values.push_back(interval_iou(predicted.intervals[i], truth.intervals[i]));
  }
  return out;
}

}  // namespace asmctl
