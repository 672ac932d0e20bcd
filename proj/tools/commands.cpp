#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "asmctl/error.hpp"
#include "asmctl/event_log.hpp"
#include "asmctl/http_service.hpp"
#include "asmctl/parallel.hpp"
#include "asmctl/plan_io.hpp"
#include "asmctl/reference_plan.hpp"
#include "asmctl/report.hpp"
#include "asmctl/scenario_io.hpp"
#include "asmctl/timeline_csv.hpp"

namespace asmctl::cli {

namespace fs = std::filesystem;

namespace {

int exit_code_for(const Error& e) {
  return e.code() == ErrorCode::kIo ? kExitIo : kExitValidation;
}

template <typename Body>
int run_guarded(std::ostream& err, Body body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
}

AssemblyPlan load_checked_plan(const fs::path& path) {
  AssemblyPlan plan = path.empty() ? reference_plan() : load_plan(path);
  require_valid(plan);
  return plan;
}

LagModel lag_model(const SimulationFlags& sim) {
  if (sim.lag_jitter_ms > 0) {
    return UniformJitterLag{std::max<std::int64_t>(0, sim.lag_ms - sim.lag_jitter_ms),
                            sim.lag_ms + sim.lag_jitter_ms};
  }
  return ConstantLag{sim.lag_ms};
}

NoiseModel noise_model(const SimulationFlags& sim) {
  return NoiseModel{sim.miss_rate, sim.fp_rate, sim.seed, sim.connection_threshold};
}

std::vector<Timeline> read_timelines(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  try {
    return parse_timelines_csv(in);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

}  // namespace

EngineConfig SimulationFlags::engine_config() const {
  if (!(fps > 0.0)) throw Error(ErrorCode::kValidation, "--fps must be positive");
  EngineConfig c;
  c.overlap_threshold = overlap_threshold;
  c.connection_threshold = connection_threshold;
  c.frame_period_ms = std::max<std::int64_t>(1, std::llround(1000.0 / fps));
  require_valid(c);
  return c;
}

void write_file_atomically(const fs::path& path, const std::string& content) {
  if (path.has_parent_path() && !fs::exists(path.parent_path())) {
    throw Error(ErrorCode::kIo, "directory '" + path.parent_path().string() + "' does not exist");
  }
  static thread_local std::mt19937_64 salt(std::random_device{}());
  fs::path tmp = path;
  tmp += ".tmp-" + std::to_string(salt());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::kIo, "failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::kIo, "cannot move output into '" + path.string() + "'");
  }
}

int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&] {
    const AssemblyPlan plan = load_checked_plan(opts.plan_path);
    const EngineConfig config = opts.sim.engine_config();
    const LagModel lag = lag_model(opts.sim);
    validate_lag(lag);
    const NoiseModel noise = noise_model(opts.sim);
    validate_noise(noise);
    if (opts.runs_per_cohort < 0) throw Error(ErrorCode::kValidation, "--runs must be >= 0");

    std::vector<CohortSpec> cohorts;
    if (opts.pace == "fast" || opts.pace == "both") cohorts.push_back({PaceProfile::fast(), opts.runs_per_cohort});
    if (opts.pace == "slow" || opts.pace == "both") cohorts.push_back({PaceProfile::slow(), opts.runs_per_cohort});
    if (cohorts.empty()) throw Error(ErrorCode::kValidation, "--pace must be fast, slow or both");
    if (opts.out_dir.empty() || !fs::is_directory(opts.out_dir)) {
      throw Error(ErrorCode::kIo, "output directory '" + opts.out_dir.string() + "' does not exist");
    }

    const auto labels = simulate_cohorts(plan, config, cohorts, lag, noise, opts.sim.seed);
    std::vector<Timeline> truth;
    std::vector<Timeline> pred;
    std::size_t incomplete = 0;
    for (const auto& l : labels) {
      truth.push_back(l.truth);
      pred.push_back(l.predicted);
      if (!l.completed) ++incomplete;
    }
    write_file_atomically(opts.out_dir / "truth.csv", timelines_to_csv(truth));
    write_file_atomically(opts.out_dir / "pred.csv", timelines_to_csv(pred));
    out << "simulated " << labels.size() << " runs";
    if (incomplete > 0) out << " (" << incomplete << " did not complete)";
    out << '\n';
    return kExitOk;
  });
}

int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&] {
    const AssemblyPlan plan = load_checked_plan(opts.plan_path);
    const EngineConfig config = opts.sim.engine_config();
    const auto events = load_scenario(opts.scenario_path, &plan);
    const LagModel lag = lag_model(opts.sim);
    validate_lag(lag);
    const NoiseModel noise = noise_model(opts.sim);
    validate_noise(noise);
    if (opts.out_dir.empty() || !fs::is_directory(opts.out_dir)) {
      throw Error(ErrorCode::kIo, "output directory '" + opts.out_dir.string() + "' does not exist");
    }

    const WorkspaceHistory history(events);
    const std::int64_t horizon = history.last_effect_ms() + max_lag_ms(lag) + config.frame_period_ms;
    FrameRenderer renderer(plan, events, lag, noise, config.frame_period_ms, horizon);
    const SessionResult result = run_session(plan, config, [&] { return renderer.next(); });

    const std::string run_id = opts.scenario_path.stem().string();
    std::ostringstream csv;
    csv << kTimelineCsvHeader << '\n';
    const auto starts = result.reached_stage_starts();
    std::optional<std::int64_t> completion;
    if (result.completed) completion = result.transitions.back().start_timestamp_ms;
    write_stage_rows(csv, run_id, "replay", starts, completion);
    std::ostringstream log;
    write_event_log(log, result);

    write_file_atomically(opts.out_dir / "pred.csv", csv.str());
    write_file_atomically(opts.out_dir / "events.jsonl", log.str());
    out << "completed=" << (result.completed ? "true" : "false")
        << " transitions=" << result.transitions.size() << '\n';
    return kExitOk;
  });
}

int cmd_evaluate(const EvaluateOptions& opts, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&] {
    const auto truth = read_timelines(opts.truth_path);
    const auto pred = read_timelines(opts.pred_path);
    if (truth.empty()) throw Error(ErrorCode::kValidation, "truth file has no runs");

    std::map<std::string, const Timeline*> pred_by_run;
    for (const auto& p : pred) pred_by_run[p.run_id] = &p;
    std::vector<Timeline> aligned_pred;
    std::map<std::string, std::string> cohort_of_run;
    for (const auto& t : truth) {
      auto it = pred_by_run.find(t.run_id);
      if (it == pred_by_run.end()) {
        throw Error(ErrorCode::kValidation, "run '" + t.run_id + "' has no prediction");
      }
      aligned_pred.push_back(*it->second);
      cohort_of_run[t.run_id] = t.cohort;
      pred_by_run.erase(it);
    }
    if (!pred_by_run.empty()) {
      throw Error(ErrorCode::kValidation, "run '" + pred_by_run.begin()->first + "' has no ground truth");
    }

    std::vector<IoUVector> ious;
    try {
      ious = batch_timeline_iou(aligned_pred, truth);
    } catch (const Error& e) {
      throw Error(ErrorCode::kValidation, e.what());
    }
    EfficiencyReport report = aggregate(ious, cohort_of_run, opts.hist_bins);
    report.mean_durations_s = mean_stage_durations_s(truth);
    write_file_atomically(opts.out_path, report_to_json(report).dump(2) + "\n");
    out << "evaluated " << truth.size() << " runs, overall mean IoU " << format_double(report.overall_mean)
        << '\n';
    return kExitOk;
  });
}

int cmd_report(const ReportOptions& opts, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&] {
    const EfficiencyReport report = report_from_json(json_util::read_json_file(opts.report_path));
    std::ostringstream body;
    if (opts.format == "csv") {
      write_report_csv(body, report);
    } else if (opts.format == "json") {
      body << report_to_json(report).dump(2) << '\n';
    } else {
      throw Error(ErrorCode::kValidation, "--format must be csv or json");
    }
    if (opts.out_path.empty()) {
      out << body.str();
    } else {
      write_file_atomically(opts.out_path, body.str());
    }
    return kExitOk;
  });
}

int cmd_serve(int port, const std::string& host, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&] {
    SessionService service;
    HttpSessionServer server(service);
    const int bound = port == 0 ? server.bind_any_port(host) : server.bind(host, port);
    if (bound <= 0) throw Error(ErrorCode::kIo, "cannot bind " + host + ":" + std::to_string(port));
    out << "listening on http://" << host << ':' << bound << std::endl;
    return server.listen_after_bind() ? kExitOk : kExitIo;
  });
}

}  // namespace asmctl::cli
