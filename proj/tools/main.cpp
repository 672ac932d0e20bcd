#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

void add_sim_flags(CLI::App* app, asmctl::cli::SimulationFlags& sim) {
  app->add_option("--lag-ms", sim.lag_ms, "Detection lag in ms");
  app->add_option("--lag-jitter", sim.lag_jitter_ms, "Uniform lag jitter half-width in ms");
  app->add_option("--miss-rate", sim.miss_rate, "Per-camera detection drop probability");
  app->add_option("--fp-rate", sim.fp_rate, "Per-camera spurious hypothesis probability");
  app->add_option("--seed", sim.seed, "Base seed; run k uses seed + k");
  app->add_option("--fps", sim.fps, "Camera frame rate");
  app->add_option("--overlap", sim.overlap_threshold, "Zone overlap threshold");
  app->add_option("--threshold", sim.connection_threshold, "Connection probability threshold");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace asmctl::cli;

  CLI::App app{"Assembly control engine, simulator and efficiency evaluator"};
  app.require_subcommand(1);

  SimulateOptions sim_opts;
  auto* simulate = app.add_subcommand("simulate", "Simulate fast/slow cohorts and write truth.csv and pred.csv");
  simulate->add_option("--plan", sim_opts.plan_path, "Plan JSON (default: built-in reference plan)");
  simulate->add_option("--runs", sim_opts.runs_per_cohort, "Runs per cohort");
  simulate->add_option("--pace", sim_opts.pace, "fast | slow | both")
      ->check(CLI::IsMember({"fast", "slow", "both"}));
  simulate->add_option("--out", sim_opts.out_dir, "Output directory")->required();
  add_sim_flags(simulate, sim_opts.sim);

  RunOptions run_opts;
  run_opts.sim.lag_ms = 0;
  auto* run = app.add_subcommand("run", "Replay a scenario file through the engine");
  run->add_option("--plan", run_opts.plan_path, "Plan JSON (default: built-in reference plan)");
  run->add_option("--scenario", run_opts.scenario_path, "Scenario JSON")->required();
  run->add_option("--out", run_opts.out_dir, "Output directory")->required();
  add_sim_flags(run, run_opts.sim);

  EvaluateOptions eval_opts;
  auto* evaluate = app.add_subcommand("evaluate", "Compare predicted and true timelines");
  evaluate->add_option("--truth", eval_opts.truth_path, "Ground-truth timeline CSV")->required();
  evaluate->add_option("--pred", eval_opts.pred_path, "Predicted timeline CSV")->required();
  evaluate->add_option("--out", eval_opts.out_path, "Report JSON path")->required();
  evaluate->add_option("--hist-bins", eval_opts.hist_bins, "Histogram bin count")
      ->check(CLI::PositiveNumber);

  ReportOptions report_opts;
  auto* report = app.add_subcommand("report", "Print plot-ready tables from a report");
  report->add_option("report", report_opts.report_path, "Report JSON")->required();
  report->add_option("--format", report_opts.format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
  report->add_option("--out", report_opts.out_path, "Write here instead of stdout");

  int port = 8080;
  std::string host = "127.0.0.1";
  auto* serve = app.add_subcommand("serve", "Serve live sessions over HTTP");
  serve->add_option("--port", port, "TCP port (0 picks a free one)");
  serve->add_option("--host", host, "Bind address");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  }

  if (*simulate) return cmd_simulate(sim_opts, std::cout, std::cerr);
  if (*run) return cmd_run(run_opts, std::cout, std::cerr);
  if (*evaluate) return cmd_evaluate(eval_opts, std::cout, std::cerr);
  if (*report) return cmd_report(report_opts, std::cout, std::cerr);
  if (*serve) return cmd_serve(port, host, std::cout, std::cerr);
  return kExitValidation;
}
