#include "replan/harness.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <thread>

namespace replan {

namespace {

namespace fs = std::filesystem;

template <int N>
void run_batch_typed(const Scenario<N>& scenario, int trials, std::uint64_t base_seed,
                     int workers, bool enforce_budget, bool want_trajectories,
                     std::vector<TrialResult>& results,
                     std::vector<std::string>& trajectories) {
  results.assign(trials, {});
  trajectories.assign(want_trajectories ? trials : 0, {});

  if (workers <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    workers = hw == 0 ? 1 : static_cast<int>(hw);
  }
  workers = std::min(workers, trials);

  std::atomic<int> next{0};
  const auto worker = [&] {
    while (true) {
      const int i = next.fetch_add(1);
      if (i >= trials) return;
      std::string* log = want_trajectories ? &trajectories[i] : nullptr;
      results[i] = run_trial(scenario, base_seed + static_cast<std::uint64_t>(i),
                             enforce_budget, log);
    }
  };

  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
}

void write_trajectories(const std::string& dir, const std::vector<std::string>& logs) {
  if (dir.empty() || logs.empty()) return;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create trajectory directory: " + dir);
  for (std::size_t i = 0; i < logs.size(); ++i) {
    const fs::path path = fs::path(dir) / ("trial_" + std::to_string(i) + ".log");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << logs[i];
  }
}

}  // namespace

MetricsSummary run_batch(const ScenarioConfig& config, int trials,
                         std::uint64_t base_seed, int workers, bool enforce_budget,
                         const BatchOptions& options) {
  if (trials < 1) throw ConfigError("run_batch: trials must be >= 1");
  std::vector<TrialResult> results;
  std::vector<std::string> trajectories;
  const bool want_traj = !options.trajectory_dir.empty();
  if (config.dimension == 2) {
    run_batch_typed(config.make2(), trials, base_seed, workers, enforce_budget,
                    want_traj, results, trajectories);
  } else {
    run_batch_typed(config.make3(), trials, base_seed, workers, enforce_budget,
                    want_traj, results, trajectories);
  }
  write_trajectories(options.trajectory_dir, trajectories);
  return summarize(options.label, results);
}

std::vector<MetricsSummary> run_case_study(CaseId id, int trials,
                                           std::uint64_t base_seed, int workers,
                                           bool enforce_budget,
                                           const std::string& trajectory_root) {
  std::vector<MetricsSummary> out;
  for (const CaseSetting& setting : case_settings(id)) {
    BatchOptions options;
    options.label = setting.label;
    if (!trajectory_root.empty())
      options.trajectory_dir =
          (std::filesystem::path(trajectory_root) / setting.label).string();
    out.push_back(
        run_batch(setting.config, trials, base_seed, workers, enforce_budget, options));
  }
  return out;
}

}  // namespace replan
