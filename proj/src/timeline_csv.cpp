#include "asmctl/timeline_csv.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "asmctl/error.hpp"

namespace asmctl {

std::string format_seconds(std::int64_t ms) {
  if (ms < 0) throw Error(ErrorCode::kInvalidInput, "negative timestamp " + std::to_string(ms));
  std::string frac = std::to_string(ms % 1000);
  frac.insert(0, 3 - frac.size(), '0');
  return std::to_string(ms / 1000) + "." + frac;
}

std::int64_t parse_seconds(std::string_view text) {
  auto bad = [&](const char* why) {
    return Error(ErrorCode::kValidation, "bad seconds value '" + std::string(text) + "': " + why);
  };
  const auto dot = text.find('.');
  const std::string_view whole = text.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
  if (whole.empty()) throw bad("missing integer part");
  auto all_digits = [](std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  if (!all_digits(whole) || !all_digits(frac)) throw bad("expected a non-negative decimal");
  if (dot != std::string_view::npos && frac.empty()) throw bad("empty fraction");
  while (frac.size() > 3 && frac.back() == '0') frac.remove_suffix(1);
  if (frac.size() > 3) throw bad("finer than one millisecond");

  std::int64_t seconds = 0;
  auto [ptr, ec] = std::from_chars(whole.data(), whole.data() + whole.size(), seconds);
  if (ec != std::errc{} || seconds > INT64_MAX / 1000 - 1) throw bad("out of range");
  std::int64_t millis = 0;
  for (std::size_t i = 0; i < 3; ++i) millis = millis * 10 + (i < frac.size() ? frac[i] - '0' : 0);
  return seconds * 1000 + millis;
}

namespace {

void check_field(std::string_view value, const char* what) {
  if (value.find_first_of(",\"\r\n") != std::string_view::npos) {
    throw Error(ErrorCode::kInvalidInput,
                std::string(what) + " '" + std::string(value) + "' cannot be written to CSV");
  }
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = line.find(sep, pos);
    out.push_back(line.substr(pos, next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

}  // namespace

void write_stage_rows(std::ostream& out, std::string_view run_id, std::string_view cohort,
                      std::span<const std::int64_t> starts,
                      std::optional<std::int64_t> completion_ms) {
  check_field(run_id, "run_id");
  check_field(cohort, "cohort");
  for (std::size_t i = 0; i < starts.size(); ++i) {
    out << run_id << ',' << cohort << ',' << i << ',' << format_seconds(starts[i]) << '\n';
  }
  if (completion_ms) {
    out << run_id << ',' << cohort << ',' << starts.size() << ',' << format_seconds(*completion_ms)
        << '\n';
  }
}

void write_timelines_csv(std::ostream& out, std::span<const Timeline> timelines) {
  out << kTimelineCsvHeader << '\n';
  for (const auto& t : timelines) {
    const auto starts = t.stage_starts();
    write_stage_rows(out, t.run_id, t.cohort, starts, t.completion_ms());
  }
}

std::vector<Timeline> parse_timelines_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kValidation, "timeline CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTimelineCsvHeader) {
    throw Error(ErrorCode::kValidation, "timeline CSV header must be '" +
                                            std::string(kTimelineCsvHeader) + "'");
  }

  struct Pending {
    std::string cohort;
    std::map<std::int64_t, std::int64_t> rows;  // stage_index -> ms
  };
  std::vector<std::string> order;
  std::map<std::string, Pending> runs;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = "timeline CSV line " + std::to_string(line_no);
    const auto cols = split(line, ',');
    if (cols.size() != 4) throw Error(ErrorCode::kValidation, where + ": expected 4 columns");
    const std::string run_id(cols[0]);
    if (run_id.empty()) throw Error(ErrorCode::kValidation, where + ": empty run_id");
    std::int64_t stage = -1;
    auto [ptr, ec] = std::from_chars(cols[2].data(), cols[2].data() + cols[2].size(), stage);
    if (ec != std::errc{} || ptr != cols[2].data() + cols[2].size() || stage < 0) {
      throw Error(ErrorCode::kValidation, where + ": bad stage_index");
    }
    const std::int64_t ms = parse_seconds(cols[3]);

    auto [it, inserted] = runs.try_emplace(run_id);
    if (inserted) {
      order.push_back(run_id);
      it->second.cohort = std::string(cols[1]);
    } else if (it->second.cohort != cols[1]) {
      throw Error(ErrorCode::kValidation, where + ": run '" + run_id + "' changes cohort");
    }
    if (!it->second.rows.emplace(stage, ms).second) {
      throw Error(ErrorCode::kValidation, where + ": duplicate stage " + std::to_string(stage) +
                                              " for run '" + run_id + "'");
    }
  }

  std::vector<Timeline> out;
  out.reserve(order.size());
  for (const auto& run_id : order) {
    const Pending& p = runs.at(run_id);
    const auto n = static_cast<std::int64_t>(p.rows.size());
    if (n < 2 || p.rows.rbegin()->first != n - 1) {
      throw Error(ErrorCode::kValidation,
                  "run '" + run_id + "' needs stage rows 0..n-1 and a completion row");
    }
    std::vector<std::int64_t> starts;
    for (const auto& [stage, ms] : p.rows) starts.push_back(ms);
    const std::int64_t completion = starts.back();
    starts.pop_back();
    try {
      out.push_back(Timeline{run_id, p.cohort, contiguous_intervals(starts, completion)});
    } catch (const Error& e) {
      throw Error(ErrorCode::kValidation, "run '" + run_id + "': " + e.what());
    }
  }
  return out;
}

std::string timelines_to_csv(std::span<const Timeline> timelines) {
  std::ostringstream os;
  write_timelines_csv(os, timelines);
  return os.str();
}

std::vector<Timeline> timelines_from_csv(const std::string& text) {
  std::istringstream is(text);
  return parse_timelines_csv(is);
}

}  // namespace asmctl
