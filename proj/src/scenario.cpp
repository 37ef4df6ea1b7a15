#include "replan/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace replan {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::set<std::string>& allowed,
                  const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.count(key))
      throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

std::vector<double> read_point(const json& j, int dim, const std::string& name) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    throw ConfigError(name + " must be an array of " + std::to_string(dim) + " numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw ConfigError(name + " must contain numbers only");
    out.push_back(v.get<double>());
  }
  return out;
}

template <int N>
Vec<N> to_vec(const std::vector<double>& v) {
  Vec<N> out;
  for (int i = 0; i < N; ++i) out[i] = v[i];
  return out;
}

template <int N>
Scenario<N> make_scenario(const ScenarioConfig& c) {
  Scenario<N> sc;
  sc.bounds = {to_vec<N>(c.bounds_min), to_vec<N>(c.bounds_max)};
  sc.start = to_vec<N>(c.start);
  sc.goal = to_vec<N>(c.goal);
  for (const auto& s : c.static_obstacles)
    sc.static_obstacles.push_back({to_vec<N>(s.center), s.radius});
  sc.num_obstacles = c.num_obstacles;
  sc.obstacle_speed = c.obstacle_speed;
  sc.obstacle_radius = c.obstacle_radius;
  sc.robot_speed = c.robot_speed;
  sc.robot_radius = c.robot_radius;
  sc.params = c.params;
  sc.tick = c.tick;
  sc.max_time = c.max_time;
  sc.max_repair_samples = c.max_repair_samples;
  sc.validate();
  return sc;
}

ScenarioConfig open_box_config(int dimension, double extent, int num_obstacles,
                               double obstacle_speed) {
  ScenarioConfig c;
  c.dimension = dimension;
  c.bounds_min.assign(dimension, 0.0);
  c.bounds_max.assign(dimension, extent);
  c.start.assign(dimension, 2.0);
  c.goal.assign(dimension, extent - 2.0);
  c.num_obstacles = num_obstacles;
  c.obstacle_speed = obstacle_speed;
  c.params.init_iterations = dimension == 3 ? 20000 : 2500;
  return c;
}

}  // namespace

Scenario<2> ScenarioConfig::make2() const {
  if (dimension != 2) throw ConfigError("scenario is not 2-dimensional");
  return make_scenario<2>(*this);
}

Scenario<3> ScenarioConfig::make3() const {
  if (dimension != 3) throw ConfigError("scenario is not 3-dimensional");
  return make_scenario<3>(*this);
}

void ScenarioConfig::validate() const {
  if (dimension == 2)
    make2();
  else if (dimension == 3)
    make3();
  else
    throw ConfigError("dimension must be 2 or 3");
}

ScenarioConfig parse_config(const std::string& source) {
  json root;
  try {
    root = json::parse(source);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config must be a JSON object");

  require_keys(root,
               {"dimension", "bounds", "start", "goal", "static_obstacles",
                "num_obstacles", "obstacle_speed", "obstacle_radius", "robot_speed",
                "robot_radius", "tick", "max_time", "max_repair_samples", "params"},
               "config");

  ScenarioConfig c;
  if (!root.contains("dimension") || !root["dimension"].is_number_integer())
    throw ConfigError("config requires an integer 'dimension'");
  c.dimension = root["dimension"].get<int>();
  if (c.dimension != 2 && c.dimension != 3)
    throw ConfigError("dimension must be 2 or 3");
  c.params.init_iterations = c.dimension == 3 ? 20000 : 2500;

  for (const char* key : {"bounds", "start", "goal", "num_obstacles", "obstacle_speed"})
    if (!root.contains(key))
      throw ConfigError(std::string("config requires '") + key + "'");

  const json& bounds = root["bounds"];
  if (!bounds.is_object()) throw ConfigError("'bounds' must be an object with min/max");
  require_keys(bounds, {"min", "max"}, "bounds");
  if (!bounds.contains("min") || !bounds.contains("max"))
    throw ConfigError("'bounds' requires both min and max");
  c.bounds_min = read_point(bounds["min"], c.dimension, "bounds.min");
  c.bounds_max = read_point(bounds["max"], c.dimension, "bounds.max");
  c.start = read_point(root["start"], c.dimension, "start");
  c.goal = read_point(root["goal"], c.dimension, "goal");

  if (root.contains("static_obstacles")) {
    if (!root["static_obstacles"].is_array())
      throw ConfigError("'static_obstacles' must be an array");
    for (const auto& item : root["static_obstacles"]) {
      if (!item.is_object()) throw ConfigError("static obstacle entries must be objects");
      require_keys(item, {"center", "radius"}, "static_obstacles[]");
      if (!item.contains("center") || !item.contains("radius"))
        throw ConfigError("static obstacles require center and radius");
      ScenarioConfig::StaticSphere s;
      s.center = read_point(item["center"], c.dimension, "static obstacle center");
      s.radius = item["radius"].get<double>();
      c.static_obstacles.push_back(std::move(s));
    }
  }

  const auto read_number = [&](const char* key, double& slot) {
    if (root.contains(key)) {
      if (!root[key].is_number()) throw ConfigError(std::string(key) + " must be a number");
      slot = root[key].get<double>();
    }
  };
  if (!root["num_obstacles"].is_number_integer())
    throw ConfigError("num_obstacles must be an integer");
  c.num_obstacles = root["num_obstacles"].get<int>();
  read_number("obstacle_speed", c.obstacle_speed);
  read_number("obstacle_radius", c.obstacle_radius);
  read_number("robot_speed", c.robot_speed);
  read_number("robot_radius", c.robot_radius);
  read_number("tick", c.tick);
  read_number("max_time", c.max_time);
  if (root.contains("max_repair_samples"))
    c.max_repair_samples = root["max_repair_samples"].get<int>();

  if (root.contains("params")) {
    const json& p = root["params"];
    if (!p.is_object()) throw ConfigError("'params' must be an object");
    require_keys(p,
                 {"risk_horizon", "reaction_horizon", "lsr_initial_radius",
                  "lsr_expansion", "lsr_max_radius", "neighbor_radius", "steer_range",
                  "init_iterations"},
                 "params");
    const auto read_param = [&](const char* key, double& slot) {
      if (p.contains(key)) slot = p[key].get<double>();
    };
    read_param("risk_horizon", c.params.risk_horizon);
    read_param("reaction_horizon", c.params.reaction_horizon);
    read_param("lsr_initial_radius", c.params.lsr_initial_radius);
    read_param("lsr_expansion", c.params.lsr_expansion);
    read_param("lsr_max_radius", c.params.lsr_max_radius);
    read_param("neighbor_radius", c.params.neighbor_radius);
    read_param("steer_range", c.params.steer_range);
    if (p.contains("init_iterations"))
      c.params.init_iterations = p["init_iterations"].get<int>();
  }

  c.validate();
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

CaseId parse_case_id(const std::string& name) {
  if (name == "2d-1") return CaseId::case_2d_speeds;
  if (name == "2d-2") return CaseId::case_2d_counts;
  if (name == "3d-1") return CaseId::case_3d_speeds;
  if (name == "3d-2") return CaseId::case_3d_counts;
  throw ConfigError("unknown case study '" + name + "' (expected 2d-1, 2d-2, 3d-1 or 3d-2)");
}

std::vector<CaseSetting> case_settings(CaseId id) {
  std::vector<CaseSetting> out;
  switch (id) {
    case CaseId::case_2d_speeds:
      for (double speed : {1.0, 2.0, 3.0, 4.0})
        out.push_back({"speed_" + std::to_string(static_cast<int>(speed)),
                       open_box_config(2, 32.0, 15, speed)});
      break;
    case CaseId::case_2d_counts:
      for (int count : {5, 10, 15, 20})
        out.push_back({"obstacles_" + std::to_string(count),
                       open_box_config(2, 32.0, count, 4.0)});
      break;
    case CaseId::case_3d_speeds:
      for (double speed : {1.0, 2.0, 3.0, 4.0})
        out.push_back({"speed_" + std::to_string(static_cast<int>(speed)),
                       open_box_config(3, 32.0, 100, speed)});
      break;
    case CaseId::case_3d_counts:
      for (int count : {25, 50, 75, 100})
        out.push_back({"obstacles_" + std::to_string(count),
                       open_box_config(3, 32.0, count, 4.0)});
      break;
  }
  return out;
}

}  // namespace replan
