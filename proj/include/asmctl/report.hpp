#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "asmctl/timeline.hpp"

namespace asmctl {

struct StageStats {
  int stage = 0;
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation

  bool operator==(const StageStats&) const = default;
};

struct Histogram {
  std::vector<double> edges;          // bins + 1 edges over [0, 1]
  std::vector<std::int64_t> counts;   // last bin is closed on the right

  bool operator==(const Histogram&) const = default;
};

struct EfficiencyReport {
  std::vector<StageStats> per_stage;
  double overall_mean = 0.0;
  std::map<std::string, double> cohort_means;
  Histogram histogram;
  std::int64_t sample_count = 0;
  // Optional per-cohort mean stage duration in seconds, from truth timelines.
  std::map<std::string, std::vector<double>> mean_durations_s;

  bool operator==(const EfficiencyReport&) const = default;
};

inline constexpr int kDefaultHistogramBins = 20;

// cohort_of_run maps run_id to cohort label; runs missing from it are
// counted under "". Throws Error(kInvalidInput) on empty input, ragged stage
// counts or a non-positive bin count.
EfficiencyReport aggregate(std::span<const IoUVector> iou_vectors,
                           const std::map<std::string, std::string>& cohort_of_run,
                           int histogram_bins = kDefaultHistogramBins);

std::map<std::string, std::vector<double>> mean_stage_durations_s(
    std::span<const Timeline> timelines);

nlohmann::json report_to_json(const EfficiencyReport& report);
// Throws Error(kValidation) when the document is not a report.
EfficiencyReport report_from_json(const nlohmann::json& doc);

// Plot-ready tables: per-stage means/deviations, histogram bins and summary.
void write_report_csv(std::ostream& out, const EfficiencyReport& report);

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

}  // namespace asmctl
