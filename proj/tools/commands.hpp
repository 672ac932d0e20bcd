#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "asmctl/plan.hpp"

namespace asmctl::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitIo = 3;

struct SimulationFlags {
  std::int64_t lag_ms = 500;
  std::int64_t lag_jitter_ms = 0;  // > 0 selects UniformJitter[lag - j, lag + j]
  double miss_rate = 0.0;
  double fp_rate = 0.0;
  std::uint64_t seed = 0;
  double fps = 10.0;
  double overlap_threshold = 0.7;
  double connection_threshold = 0.6;

  EngineConfig engine_config() const;
};

struct SimulateOptions {
  std::filesystem::path plan_path;  // empty: built-in reference plan
  int runs_per_cohort = 30;
  std::string pace = "both";  // fast | slow | both
  SimulationFlags sim;
  std::filesystem::path out_dir;
};

struct RunOptions {
  std::filesystem::path plan_path;
  std::filesystem::path scenario_path;
  SimulationFlags sim;  // lag/noise default to zero for replays
  std::filesystem::path out_dir;
};

struct EvaluateOptions {
  std::filesystem::path truth_path;
  std::filesystem::path pred_path;
  std::filesystem::path out_path;
  int hist_bins = 20;
};

struct ReportOptions {
  std::filesystem::path report_path;
  std::string format = "csv";  // csv | json
  std::filesystem::path out_path;  // empty: write to `out`
};

// Each command writes diagnostics to `err` and returns an exit status.
int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err);
int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err);
int cmd_evaluate(const EvaluateOptions& opts, std::ostream& out, std::ostream& err);
int cmd_report(const ReportOptions& opts, std::ostream& out, std::ostream& err);
int cmd_serve(int port, const std::string& host, std::ostream& out, std::ostream& err);

// Writes `content` to a temp file beside `path` and renames it into place.
void write_file_atomically(const std::filesystem::path& path, const std::string& content);

}  // namespace asmctl::cli
