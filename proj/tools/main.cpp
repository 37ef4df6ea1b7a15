#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "replan/harness.hpp"

namespace {

void print_summaries(const std::vector<replan::MetricsSummary>& summaries) {
  for (const auto& m : summaries) {
    std::cout << (m.label.empty() ? std::string("batch") : m.label) << ": " << m.successes
              << "/" << m.trials << " succeeded (rate " << m.success_rate << ")";
    if (m.travel_s.count > 0)
      std::cout << ", median travel " << m.travel_s.median << " s";
    if (m.replan_ms.count > 0)
      std::cout << ", median avg replan " << m.replan_ms.median << " ms";
    std::cout << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive replanning benchmark runner"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::string format = "csv";
  std::string case_name;
  int trials = 100;
  std::uint64_t seed = 1;
  int workers = 0;
  bool log_trajectories = false;
  bool no_time_budget = false;

  CLI::App* run = app.add_subcommand("run", "Run one scenario from a config file");
  run->add_option("--config", config_path, "Scenario JSON file")->required();
  run->add_option("--trials", trials, "Number of trials");
  run->add_option("--seed", seed, "Base seed; trial i uses seed+i");
  run->add_option("--workers", workers, "Worker threads (0 = hardware)");
  run->add_option("--out-dir", out_dir, "Output directory");
  run->add_option("--format", format, "Summary format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  run->add_flag("--log-trajectories", log_trajectories,
                "Write per-trial trajectory logs");
  run->add_flag("--no-time-budget", no_time_budget,
                "Deterministic mode: disable the wall-clock replanning budget");

  CLI::App* cs = app.add_subcommand("case-study", "Run one of the built-in case studies");
  cs->add_option("--case", case_name, "One of: 2d-1, 2d-2, 3d-1, 3d-2")->required();
  cs->add_option("--trials", trials, "Trials per setting");
  cs->add_option("--seed", seed, "Base seed");
  cs->add_option("--workers", workers, "Worker threads (0 = hardware)");
  cs->add_option("--out-dir", out_dir, "Output directory");
  cs->add_option("--format", format, "Summary format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  CLI11_PARSE(app, argc, argv);

  const auto report_format =
      format == "json" ? replan::ReportFormat::json : replan::ReportFormat::csv;

  try {
    std::vector<replan::MetricsSummary> summaries;
    if (run->parsed()) {
      replan::BatchOptions options;
      if (log_trajectories)
        options.trajectory_dir =
            (std::filesystem::path(out_dir) / "trajectories").string();
      summaries.push_back(replan::run_batch(replan::load_config(config_path), trials,
                                            seed, workers, !no_time_budget, options));
    } else {
      summaries = replan::run_case_study(replan::parse_case_id(case_name), trials, seed,
                                         workers);
    }
    replan::emit_report(summaries, report_format, out_dir);
    print_summaries(summaries);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
