#include "replan/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace replan {

namespace {

namespace fs = std::filesystem;

FailureReason parse_reason(const std::string& s) {
  if (s == "none") return FailureReason::none;
  if (s == "collision") return FailureReason::collision;
  if (s == "replan_timeout") return FailureReason::replan_timeout;
  if (s == "tick_budget_config") return FailureReason::tick_budget;
  throw ConfigError("unknown failure reason '" + s + "'");
}

double parse_double(const std::string& s) {
  double v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ConfigError("bad number in CSV: '" + s + "'");
  return v;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << content;
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace

Quartiles compute_quartiles(std::vector<double> values) {
  Quartiles q;
  q.count = values.size();
  if (values.empty()) return q;
  std::sort(values.begin(), values.end());
  const auto at = [&](double p) {
    const double h = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(h);
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  q.q1 = at(0.25);
  q.median = at(0.5);
  q.q3 = at(0.75);
  return q;
}

MetricsSummary summarize(const std::string& label, const std::vector<TrialResult>& results) {
  MetricsSummary m;
  m.label = label;
  m.trials = static_cast<int>(results.size());
  for (std::size_t i = 0; i < results.size(); ++i) {
    const TrialResult& r = results[i];
    TrialRow row;
    row.trial_id = static_cast<int>(i);
    row.seed = r.seed;
    row.success = r.success;
    row.failure_reason = r.failure_reason;
    row.travel_time_s = r.travel_time;
    row.num_replans = static_cast<int>(r.replan_events.size());
    row.avg_replan_ms = r.avg_replan_ms();
    row.max_replan_ms = r.max_replan_ms();
    m.rows.push_back(row);

    if (r.success) {
      ++m.successes;
      m.travel_times_s.push_back(r.travel_time);
    } else {
      ++m.failure_breakdown[r.failure_reason];
    }
    if (!r.replan_events.empty())
      m.avg_replan_ms_per_trial.push_back(row.avg_replan_ms);
  }
  m.success_rate = m.trials == 0 ? 0.0
                                 : static_cast<double>(m.successes) /
                                       static_cast<double>(m.trials);
  m.replan_ms = compute_quartiles(m.avg_replan_ms_per_trial);
  m.travel_s = compute_quartiles(m.travel_times_s);
  return m;
}

std::string trials_to_csv(const std::vector<TrialRow>& rows) {
  std::string out =
      "trial_id,seed,success,failure_reason,travel_time_s,num_replans,"
      "avg_replan_ms,max_replan_ms\n";
  for (const TrialRow& r : rows) {
    out += std::to_string(r.trial_id);
    out += ',';
    out += std::to_string(r.seed);
    out += ',';
    out += r.success ? "true" : "false";
    out += ',';
    out += to_string(r.failure_reason);
    out += ',';
    format_double(out, r.travel_time_s);
    out += ',';
    out += std::to_string(r.num_replans);
    out += ',';
    format_double(out, r.avg_replan_ms);
    out += ',';
    format_double(out, r.max_replan_ms);
    out += '\n';
  }
  return out;
}

std::vector<TrialRow> parse_trials_csv(const std::string& text) {
  std::vector<TrialRow> rows;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      continue;  // header
    }
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 8) throw ConfigError("trials CSV row has wrong arity");
    TrialRow r;
    r.trial_id = static_cast<int>(parse_double(fields[0]));
    r.seed = static_cast<std::uint64_t>(parse_double(fields[1]));
    r.success = fields[2] == "true";
    r.failure_reason = parse_reason(fields[3]);
    r.travel_time_s = parse_double(fields[4]);
    r.num_replans = static_cast<int>(parse_double(fields[5]));
    r.avg_replan_ms = parse_double(fields[6]);
    r.max_replan_ms = parse_double(fields[7]);
    rows.push_back(r);
  }
  return rows;
}

std::string summary_to_json(const std::vector<MetricsSummary>& summaries) {
  nlohmann::ordered_json root = nlohmann::ordered_json::array();
  for (const MetricsSummary& m : summaries) {
    nlohmann::ordered_json j;
    j["label"] = m.label;
    j["trials"] = m.trials;
    j["successes"] = m.successes;
    j["success_rate"] = m.success_rate;
    nlohmann::ordered_json breakdown;
    for (const auto& [reason, count] : m.failure_breakdown)
      breakdown[to_string(reason)] = count;
    j["failure_breakdown"] = breakdown;
    j["replan_ms"] = {{"count", m.replan_ms.count},
                      {"q1", m.replan_ms.q1},
                      {"median", m.replan_ms.median},
                      {"q3", m.replan_ms.q3}};
    j["travel_s"] = {{"count", m.travel_s.count},
                     {"q1", m.travel_s.q1},
                     {"median", m.travel_s.median},
                     {"q3", m.travel_s.q3}};
    j["avg_replan_ms_per_trial"] = m.avg_replan_ms_per_trial;
    j["travel_times_s"] = m.travel_times_s;
    root.push_back(std::move(j));
  }
  return root.dump(2) + "\n";
}

namespace {

std::string summary_to_csv(const std::vector<MetricsSummary>& summaries) {
  std::string out =
      "label,trials,successes,success_rate,fail_collision,fail_replan_timeout,"
      "fail_tick_budget,replan_ms_q1,replan_ms_median,replan_ms_q3,"
      "travel_s_q1,travel_s_median,travel_s_q3\n";
  for (const MetricsSummary& m : summaries) {
    const auto fail_count = [&](FailureReason r) {
      const auto it = m.failure_breakdown.find(r);
      return it == m.failure_breakdown.end() ? 0 : it->second;
    };
    out += m.label;
    out += ',';
    out += std::to_string(m.trials);
    out += ',';
    out += std::to_string(m.successes);
    out += ',';
    format_double(out, m.success_rate);
    out += ',';
    out += std::to_string(fail_count(FailureReason::collision));
    out += ',';
    out += std::to_string(fail_count(FailureReason::replan_timeout));
    out += ',';
    out += std::to_string(fail_count(FailureReason::tick_budget));
    for (double v : {m.replan_ms.q1, m.replan_ms.median, m.replan_ms.q3,
                     m.travel_s.q1, m.travel_s.median, m.travel_s.q3}) {
      out += ',';
      format_double(out, v);
    }
    out += '\n';
  }
  return out;
}

}  // namespace

void emit_report(const std::vector<MetricsSummary>& summaries, ReportFormat format,
                 const std::string& destination) {
  const fs::path dest(destination);
  std::error_code ec;
  fs::create_directories(dest, ec);
  if (ec) throw IoError("cannot create output directory: " + dest.string());

  if (summaries.size() == 1) {
    write_file(dest / "trials.csv", trials_to_csv(summaries.front().rows));
  } else {
    for (const MetricsSummary& m : summaries) {
      const fs::path sub = dest / m.label;
      fs::create_directories(sub, ec);
      if (ec) throw IoError("cannot create output directory: " + sub.string());
      write_file(sub / "trials.csv", trials_to_csv(m.rows));
    }
  }
  if (format == ReportFormat::json)
    write_file(dest / "summary.json", summary_to_json(summaries));
  else
    write_file(dest / "summary.csv", summary_to_csv(summaries));
}

}  // namespace replan
