#pragma once

#include <string>
#include <vector>

#include "replan/sim.hpp"

namespace replan {

/// Dimension-erased scenario as read from a config file. Converted to the
/// typed Scenario<2>/Scenario<3> once, at dispatch.
struct ScenarioConfig {
  int dimension = 2;
  std::vector<double> bounds_min;
  std::vector<double> bounds_max;
  std::vector<double> start;
  std::vector<double> goal;
  struct StaticSphere {
    std::vector<double> center;
    double radius = 0.0;
  };
  std::vector<StaticSphere> static_obstacles;
  int num_obstacles = 0;
  double obstacle_speed = 0.0;
  double obstacle_radius = 0.5;
  double robot_speed = 4.0;
  double robot_radius = 0.5;
  Params params{};
  double tick = 0.1;
  double max_time = 60.0;
  int max_repair_samples = 5000;

  Scenario<2> make2() const;
  Scenario<3> make3() const;
  void validate() const;
};

/// Parses the JSON scenario format. Missing optional keys fall back to the
/// study defaults for the configured dimension; unknown keys are rejected.
ScenarioConfig parse_config(const std::string& source);

/// Convenience wrapper: read a file and parse it.
ScenarioConfig load_config(const std::string& path);

enum class CaseId { case_2d_speeds, case_2d_counts, case_3d_speeds, case_3d_counts };

/// Parses "2d-1", "2d-2", "3d-1", "3d-2".
CaseId parse_case_id(const std::string& name);

struct CaseSetting {
  std::string label;
  ScenarioConfig config;
};

/// The four benchmark case studies: an open 32 m box, start and goal in
/// opposite corners, and a sweep over either obstacle speed or obstacle
/// count.
std::vector<CaseSetting> case_settings(CaseId id);

}  // namespace replan
