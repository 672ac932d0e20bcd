#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "asmctl/timeline.hpp"

namespace asmctl {

// Timeline CSV: header run_id,cohort,stage_index,start_s. Each run lists its
// stage starts followed by one row whose stage_index equals the stage count
// and whose start_s is the completion time. Seconds carry at most three
// decimals so the millisecond value is exact.
inline constexpr std::string_view kTimelineCsvHeader = "run_id,cohort,stage_index,start_s";

std::string format_seconds(std::int64_t ms);
// Throws Error(kValidation) on malformed or sub-millisecond values.
std::int64_t parse_seconds(std::string_view text);

void write_timelines_csv(std::ostream& out, std::span<const Timeline> timelines);

// Rows for a run that may be unfinished: the completion row is written only
// when completion_ms is set.
void write_stage_rows(std::ostream& out, std::string_view run_id, std::string_view cohort,
                      std::span<const std::int64_t> starts,
                      std::optional<std::int64_t> completion_ms);

// Runs in order of first appearance. Throws Error(kValidation).
std::vector<Timeline> parse_timelines_csv(std::istream& in);

std::string timelines_to_csv(std::span<const Timeline> timelines);
std::vector<Timeline> timelines_from_csv(const std::string& text);

}  // namespace asmctl
