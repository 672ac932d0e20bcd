#include "asmctl/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <ostream>

#include "asmctl/error.hpp"
#include "asmctl/plan_io.hpp"

namespace asmctl {

using nlohmann::json;

namespace {

// Summing in sorted order makes the result independent of input order.
double sorted_mean(std::vector<double>& values) {
  std::sort(values.begin(), values.end());
  const double sum = std::accumulate(values.begin(), values.end(), 0.0);
  return sum / static_cast<double>(values.size());
}

double population_stddev(const std::vector<double>& sorted_values, double mean) {
  double acc = 0.0;
  for (double v : sorted_values) acc += (v - mean) * (v - mean);
  return std::sqrt(acc / static_cast<double>(sorted_values.size()));
}

}  // namespace

EfficiencyReport aggregate(std::span<const IoUVector> iou_vectors,
                           const std::map<std::string, std::string>& cohort_of_run,
                           int histogram_bins) {
  if (iou_vectors.empty()) throw Error(ErrorCode::kInvalidInput, "aggregate needs at least one run");
  if (histogram_bins < 1) throw Error(ErrorCode::kInvalidInput, "histogram needs at least one bin");
  const std::size_t stages = iou_vectors.front().values.size();
  if (stages == 0) throw Error(ErrorCode::kInvalidInput, "runs have no stages");
  for (const auto& v : iou_vectors) {
    if (v.values.size() != stages) {
      throw Error(ErrorCode::kInvalidInput, "run '" + v.run_id + "' has " +
                                                std::to_string(v.values.size()) + " stages, expected " +
                                                std::to_string(stages));
    }
  }

  EfficiencyReport report;
  report.histogram.counts.assign(histogram_bins, 0);
  for (int i = 0; i <= histogram_bins; ++i) {
    report.histogram.edges.push_back(static_cast<double>(i) / histogram_bins);
  }

  std::vector<double> all;
  std::map<std::string, std::vector<double>> by_cohort;
  for (std::size_t s = 0; s < stages; ++s) {
    std::vector<double> column;
    column.reserve(iou_vectors.size());
    for (const auto& v : iou_vectors) column.push_back(v.values[s]);
    const double mean = sorted_mean(column);
    report.per_stage.push_back({static_cast<int>(s), mean, population_stddev(column, mean)});
  }
  for (const auto& v : iou_vectors) {
    auto it = cohort_of_run.find(v.run_id);
    auto& bucket = by_cohort[it == cohort_of_run.end() ? std::string() : it->second];
    for (double x : v.values) {
      all.push_back(x);
      bucket.push_back(x);
      const int bin = std::clamp(static_cast<int>(std::floor(x * histogram_bins)), 0, histogram_bins - 1);
      ++report.histogram.counts[bin];
    }
  }
  report.sample_count = static_cast<std::int64_t>(all.size());
  report.overall_mean = sorted_mean(all);
  for (auto& [label, values] : by_cohort) report.cohort_means[label] = sorted_mean(values);
  return report;
}

std::map<std::string, std::vector<double>> mean_stage_durations_s(
    std::span<const Timeline> timelines) {
  std::map<std::string, std::vector<std::vector<double>>> columns;
  for (const auto& t : timelines) {
    auto& cols = columns[t.cohort];
    if (cols.empty()) cols.resize(t.stage_count());
    if (cols.size() != t.stage_count()) {
      throw Error(ErrorCode::kInvalidInput, "run '" + t.run_id + "' has a different stage count");
    }
    for (std::size_t i = 0; i < t.stage_count(); ++i) {
      cols[i].push_back(static_cast<double>(t.intervals[i].length()) / 1000.0);
    }
  }
  std::map<std::string, std::vector<double>> out;
  for (auto& [cohort, cols] : columns) {
    auto& means = out[cohort];
    for (auto& col : cols) means.push_back(sorted_mean(col));
  }
  return out;
}

json report_to_json(const EfficiencyReport& report) {
  json per_stage = json::array();
  for (const auto& s : report.per_stage) {
    per_stage.push_back({{"stage", s.stage}, {"mean", s.mean}, {"std", s.stddev}});
  }
  json doc = {{"sample_count", report.sample_count},
              {"per_stage", per_stage},
              {"overall", report.overall_mean},
              {"cohorts", report.cohort_means},
              {"histogram", {{"edges", report.histogram.edges}, {"counts", report.histogram.counts}}}};
  if (!report.mean_durations_s.empty()) doc["mean_durations_s"] = report.mean_durations_s;
  return doc;
}

EfficiencyReport report_from_json(const json& doc) {
  using namespace json_util;
  const std::string ctx = "report";
  require_object(doc, ctx);
  reject_unknown_keys(doc, {"sample_count", "per_stage", "overall", "cohorts", "histogram",
                            "mean_durations_s"},
                      ctx);
  EfficiencyReport r;
  try {
    r.sample_count = integer_field(doc, "sample_count", ctx);
    r.overall_mean = number_field(doc, "overall", ctx);
    for (const auto& s : field(doc, "per_stage", ctx)) {
      r.per_stage.push_back({static_cast<int>(integer_field(s, "stage", ctx + ".per_stage")),
                             number_field(s, "mean", ctx + ".per_stage"),
                             number_field(s, "std", ctx + ".per_stage")});
    }
    r.cohort_means = field(doc, "cohorts", ctx).get<std::map<std::string, double>>();
    const json& h = field(doc, "histogram", ctx);
    r.histogram.edges = field(h, "edges", ctx + ".histogram").get<std::vector<double>>();
    r.histogram.counts = field(h, "counts", ctx + ".histogram").get<std::vector<std::int64_t>>();
    if (doc.contains("mean_durations_s")) {
      r.mean_durations_s = doc["mean_durations_s"].get<std::map<std::string, std::vector<double>>>();
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kValidation, ctx + ": " + e.what());
  }

  if (r.per_stage.empty()) throw Error(ErrorCode::kValidation, "report has no stages");
  if (r.histogram.edges.size() != r.histogram.counts.size() + 1 || r.histogram.counts.empty()) {
    throw Error(ErrorCode::kValidation, "report histogram needs counts.size() + 1 edges");
  }
  const auto total = std::accumulate(r.histogram.counts.begin(), r.histogram.counts.end(),
                                     std::int64_t{0});
  if (total != r.sample_count) {
    throw Error(ErrorCode::kValidation, "report histogram counts do not sum to sample_count");
  }
  return r;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_report_csv(std::ostream& out, const EfficiencyReport& report) {
  out << "stage,mean_iou,std_iou";
  for (const auto& [cohort, _] : report.mean_durations_s) out << ",mean_duration_s_" << cohort;
  out << '\n';
  for (const auto& s : report.per_stage) {
    out << s.stage << ',' << format_double(s.mean) << ',' << format_double(s.stddev);
    for (const auto& [_, durations] : report.mean_durations_s) {
      out << ',';
      if (static_cast<std::size_t>(s.stage) < durations.size()) out << format_double(durations[s.stage]);
    }
    out << '\n';
  }
  out << '\n' << "bin_lo,bin_hi,count\n";
  for (std::size_t i = 0; i < report.histogram.counts.size(); ++i) {
    out << format_double(report.histogram.edges[i]) << ',' << format_double(report.histogram.edges[i + 1])
        << ',' << report.histogram.counts[i] << '\n';
  }
  out << '\n' << "metric,value\n";
  out << "overall_mean," << format_double(report.overall_mean) << '\n';
  out << "sample_count," << report.sample_count << '\n';
  for (const auto& [cohort, mean] : report.cohort_means) {
    out << "cohort_mean_" << cohort << ',' << format_double(mean) << '\n';
  }
}

}  // namespace asmctl
