#pragma once

#include <map>
#include <string>
#include <vector>

#include "replan/sim.hpp"

namespace replan {

struct TrialRow {
  int trial_id = 0;
  std::uint64_t seed = 0;
  bool success = false;
  FailureReason failure_reason = FailureReason::none;
  double travel_time_s = 0.0;
  int num_replans = 0;
  double avg_replan_ms = 0.0;
  double max_replan_ms = 0.0;
};

struct Quartiles {
  std::size_t count = 0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
};

/// Linear-interpolation quantiles over a copy of the values.
Quartiles compute_quartiles(std::vector<double> values);

/// Batch aggregate. Travel statistics cover successful trials only;
/// replanning statistics cover trials with at least one replanning event.
struct MetricsSummary {
  std::string label;
  int trials = 0;
  int successes = 0;
  double success_rate = 0.0;
  std::vector<double> avg_replan_ms_per_trial;
  Quartiles replan_ms;
  std::vector<double> travel_times_s;
  Quartiles travel_s;
  std::map<FailureReason, int> failure_breakdown;
  std::vector<TrialRow> rows;
};

MetricsSummary summarize(const std::string& label, const std::vector<TrialResult>& results);

enum class ReportFormat { csv, json };

/// Writes trials.csv (one file per summary; multiple summaries go to
/// per-label subdirectories) and summary.csv or summary.json under
/// `destination`.
void emit_report(const std::vector<MetricsSummary>& summaries, ReportFormat format,
                 const std::string& destination);

std::string summary_to_json(const std::vector<MetricsSummary>& summaries);
std::string trials_to_csv(const std::vector<TrialRow>& rows);

/// Inverse of trials_to_csv, for self-consistency checks over emitted files.
std::vector<TrialRow> parse_trials_csv(const std::string& text);

}  // namespace replan
