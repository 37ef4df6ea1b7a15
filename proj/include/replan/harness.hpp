#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "replan/metrics.hpp"
#include "replan/scenario.hpp"

namespace replan {

struct BatchOptions {
  std::string label;
  /// When nonempty, per-trial trajectory logs are written to
  /// <trajectory_dir>/trial_<id>.log.
  std::string trajectory_dir;
};

/// Runs `trials` independent trials seeded base_seed .. base_seed+trials-1,
/// dispatched over `workers` threads (0 = hardware concurrency). Seeds are
/// tied to trial indices, not dispatch order, so the summary is identical
/// for any worker count.
MetricsSummary run_batch(const ScenarioConfig& config, int trials,
                         std::uint64_t base_seed, int workers, bool enforce_budget,
                         const BatchOptions& options = {});

/// Runs the four-setting sweep of one case study; one summary per setting.
std::vector<MetricsSummary> run_case_study(CaseId id, int trials,
                                           std::uint64_t base_seed, int workers,
                                           bool enforce_budget = true,
                                           const std::string& trajectory_root = {});

}  // namespace replan
