#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "replan/entities.hpp"
#include "replan/replanner.hpp"

namespace replan {

/// Per-setting simulation description; the typed counterpart of a parsed
/// config file.
template <int N>
struct Scenario {
  Bounds<N> bounds{};
  Vec<N> start{};
  Vec<N> goal{};
  std::vector<Sphere<N>> static_obstacles;
  int num_obstacles = 0;
  double obstacle_speed = 0.0;
  double obstacle_radius = 0.5;
  double robot_speed = 4.0;
  double robot_radius = 0.5;
  Params params{};
  double tick = 0.1;      // s
  double max_time = 60.0; // s, trial aborts past this (tick budget)
  int max_repair_samples = 5000;

  void validate() const {
    params.validate();
    if (tick <= 0) throw ConfigError("scenario: tick must be positive");
    if (max_time <= 0) throw ConfigError("scenario: max_time must be positive");
    if (robot_speed <= 0) throw ConfigError("scenario: robot_speed must be positive");
    if (robot_radius < 0 || obstacle_radius < 0 || obstacle_speed < 0 ||
        num_obstacles < 0)
      throw ConfigError("scenario: negative obstacle/robot quantities");
    for (int i = 0; i < N; ++i)
      if (bounds.min[i] > bounds.max[i])
        throw ConfigError("scenario: bounds min exceeds max");
    if (!bounds.contains(start) || !bounds.contains(goal))
      throw ConfigError("scenario: start/goal outside workspace bounds");
    for (const auto& s : static_obstacles) {
      if (s.radius < 0) throw ConfigError("scenario: negative obstacle radius");
      if (!bounds.contains(s.center))
        throw ConfigError("scenario: static obstacle outside workspace bounds");
      if (s.contains(start)) throw ConfigError("scenario: start inside a static obstacle");
      if (s.contains(goal)) throw ConfigError("scenario: goal inside a static obstacle");
    }
  }
};

// --- obstacle and robot stepping -------------------------------------------

namespace detail {

inline Vec2 heading_dir(double heading) { return Vec2{{std::cos(heading), std::sin(heading)}}; }

inline void resample_leg(ObstacleMotion<2>& m, RandomStream& rng) {
  m.heading = rng.uniform(0.0, 2.0 * std::numbers::pi);
  m.remaining = std::max(rng.uniform(0.0, 10.0), 1e-9);
}

}  // namespace detail

/// Advances a 2D obstacle: walk the current heading, drawing a fresh
/// heading and leg length whenever the leg runs out mid-step. A sub-move
/// that would exit the workspace resamples the heading (bounded retries,
/// then clamps).
inline void obstacle_step(Obstacle<2>& o, double dt, const Bounds<2>& bounds,
                          RandomStream& rng) {
  double left = o.speed * dt;
  int guard = 0;
  while (left > 1e-12 && ++guard <= 64) {
    const double adv = std::min(left, o.motion.remaining);
    Vec2 prop = o.center + adv * detail::heading_dir(o.motion.heading);
    if (!bounds.contains(prop)) {
      bool ok = false;
      for (int k = 0; k < 32; ++k) {
        const double h = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const Vec2 q = o.center + adv * detail::heading_dir(h);
        if (bounds.contains(q)) {
          o.motion.heading = h;
          prop = q;
          ok = true;
          break;
        }
      }
      if (!ok) prop = bounds.clamp(prop);
    }
    o.center = prop;
    o.motion.remaining -= adv;
    left -= adv;
    if (o.motion.remaining <= 1e-12) detail::resample_leg(o.motion, rng);
  }
}

/// Advances a 3D obstacle toward its waypoint, drawing a fresh uniform
/// waypoint on arrival and spending any leftover motion toward it.
inline void obstacle_step(Obstacle<3>& o, double dt, const Bounds<3>& bounds,
                          RandomStream& rng) {
  double left = o.speed * dt;
  int guard = 0;
  while (left > 1e-12 && ++guard <= 64) {
    const Vec3 leg = o.motion.waypoint - o.center;
    const double d = leg.norm();
    if (d <= left) {
      o.center = o.motion.waypoint;
      left -= d;
      Vec3 wp = sample_uniform(bounds, rng);
      for (int k = 0; k < 16 && distance(wp, o.center) < 1e-9; ++k)
        wp = sample_uniform(bounds, rng);
      o.motion.waypoint = wp;
    } else {
      o.center = o.center + (left / d) * leg;
      left = 0.0;
    }
  }
}

/// Constant-speed polyline follower; holonomic, so corners are crossed with
/// leftover carry and the goal is snapped to once the remaining polyline
/// fits in one step.
template <int N>
void robot_step(RobotState<N>& robot, const Path<N>& path, double dt) {
  double left = robot.speed * dt;
  while (left > 1e-12) {
    if (robot.path_cursor >= path.waypoints.size()) {
      if (!path.waypoints.empty() && robot.position == path.waypoints.back()) return;
      throw StateError("robot_step: path exhausted before reaching the goal");
    }
    const Vec<N>& target = path.waypoints[robot.path_cursor];
    const Vec<N> leg = target - robot.position;
    const double d = leg.norm();
    if (d <= left) {
      robot.position = target;
      left -= d;
      ++robot.path_cursor;
      if (robot.path_cursor >= path.waypoints.size()) return;  // at goal
    } else {
      robot.position = robot.position + (left / d) * leg;
      left = 0.0;
    }
  }
}

/// Strict-inequality contact test (touching exactly is not a collision).
template <int N>
bool collision_check(const RobotState<N>& robot, const std::vector<Obstacle<N>>& obstacles) {
  for (const auto& o : obstacles)
    if (distance(robot.position, o.center) < o.radius + robot.radius) return true;
  return false;
}

// --- trial loop -------------------------------------------------------------

enum class FailureReason { none, collision, replan_timeout, tick_budget };

inline const char* to_string(FailureReason r) {
  switch (r) {
    case FailureReason::none: return "none";
    case FailureReason::collision: return "collision";
    case FailureReason::replan_timeout: return "replan_timeout";
    case FailureReason::tick_budget: return "tick_budget_config";
  }
  return "unknown";
}

/// One replanning event record. duration_ms is wall-clock when the time
/// budget is enforced and 0 in deterministic runs (so results stay
/// bit-identical across machines and repetitions).
struct ReplanEvent {
  double tick_time = 0.0;
  double duration_ms = 0.0;
  int cpr_spheres = 0;
  int pruned_nodes = 0;
  int subtree_count = 0;
  int search_passes = 0;
  int reconnections = 0;
  int fallback_samples = 0;
};

struct TrialResult {
  bool success = false;
  FailureReason failure_reason = FailureReason::none;
  double travel_time = 0.0;  // s, ticks * tick at termination
  std::vector<ReplanEvent> replan_events;
  std::uint64_t seed = 0;

  double avg_replan_ms() const {
    if (replan_events.empty()) return 0.0;
    double s = 0;
    for (const auto& e : replan_events) s += e.duration_ms;
    return s / static_cast<double>(replan_events.size());
  }
  double max_replan_ms() const {
    double m = 0;
    for (const auto& e : replan_events) m = std::max(m, e.duration_ms);
    return m;
  }
};

/// Test instrumentation points; production runs pass none of these.
template <int N>
struct TrialHooks {
  std::function<void(int tick, const RobotState<N>&, const std::vector<Obstacle<N>>&)> on_tick;
  std::function<void(const Tree<N>&, const SubtreePartition&, const std::vector<Sphere<N>>&)>
      after_prune;
  std::function<void(const Tree<N>&, const SubtreePartition&, const Path<N>&,
                     const std::vector<Sphere<N>>&)>
      after_replan;
  std::function<void(const Tree<N>&, const SubtreePartition&, const RestoreReport&)>
      after_restore;
  /// Forces every validation to pass; used by scripted-collision fixtures.
  bool disable_replanning = false;
};

template <int N>
void append_trajectory_row(std::string& log, double t, const RobotState<N>& robot,
                           const std::vector<Obstacle<N>>& obstacles) {
  format_double(log, t);
  for (int i = 0; i < N; ++i) {
    log += ' ';
    format_double(log, robot.position[i]);
  }
  for (const auto& o : obstacles)
    for (int i = 0; i < N; ++i) {
      log += ' ';
      format_double(log, o.center[i]);
    }
  log += '\n';
}

/// Obstacles spawn uniformly in the workspace, outside static obstacles and
/// far enough from the start that the trial does not open with the start
/// inside a hazard zone (an unwinnable position the planner never chose).
template <int N>
std::vector<Obstacle<N>> spawn_obstacles(const Scenario<N>& sc,
                                         const StaticWorld<N>& world,
                                         RandomStream& rng) {
  std::vector<Obstacle<N>> obstacles;
  obstacles.reserve(sc.num_obstacles);
  const double start_clearance =
      sc.obstacle_speed * sc.params.risk_horizon + sc.obstacle_radius + sc.robot_radius;
  for (int i = 0; i < sc.num_obstacles; ++i) {
    Obstacle<N> o;
    o.id = i;
    o.radius = sc.obstacle_radius;
    o.speed = sc.obstacle_speed;
    o.center = sample_uniform(sc.bounds, rng);
    for (int tries = 0; tries < 1000; ++tries) {
      if (world.point_clear(o.center) &&
          distance(o.center, sc.start) > start_clearance)
        break;
      o.center = sample_uniform(sc.bounds, rng);
    }
    if constexpr (N == 2) {
      detail::resample_leg(o.motion, rng);
    } else {
      o.motion.waypoint = sample_uniform(sc.bounds, rng);
    }
    obstacles.push_back(o);
  }
  return obstacles;
}

/// Entry connection for the initial path: nearest-by-total-cost goal-subtree
/// node with a statically clear segment, searched with an expanding radius.
template <int N>
NodeId connect_position(const Tree<N>& tree, const StaticWorld<N>& world,
                        const Vec<N>& pos, double radius) {
  std::vector<NodeId> scratch;
  for (double r = radius; r <= 2.0 * world.bounds.diameter(); r *= 2.0) {
    const NodeId entry = find_entry_node(tree, pos, {}, world, r, scratch);
    if (entry != kNoNode) return entry;
  }
  throw ConfigError("start position cannot reach the planning tree through the static world");
}

/// Full navigation trial: build the goal-rooted tree, then per 0.1 s tick
/// advance the clock, the obstacles and the robot; when the path ahead is
/// blocked, run the prune -> repair -> rewire -> path -> restore sequence
/// while the robot holds position. Fails on collision, on a replanning
/// event exceeding the tick when `enforce_budget` is set, or on running out
/// of configured trial time. Deterministic given the seed when
/// enforce_budget is false.
template <int N>
TrialResult run_trial(const Scenario<N>& sc, std::uint64_t seed, bool enforce_budget,
                      std::string* trajectory_log = nullptr,
                      const TrialHooks<N>* hooks = nullptr) {
  sc.validate();
  TrialResult result;
  result.seed = seed;

  RandomStream root(seed);
  RandomStream rng_tree = root.substream(0);
  RandomStream rng_obstacles = root.substream(1);
  RandomStream rng_repair = root.substream(2);

  const StaticWorld<N> world{sc.bounds, sc.static_obstacles};
  Tree<N> tree = build_initial_tree(world, sc.goal, sc.params.init_iterations,
                                    sc.params.steer_range, sc.params.neighbor_radius,
                                    rng_tree);
  SubtreePartition partition;
  partition.roots.emplace(0, tree.goal_root());

  RobotState<N> robot{sc.start, sc.robot_speed, sc.robot_radius, 1};
  std::vector<Obstacle<N>> obstacles = spawn_obstacles(sc, world, rng_obstacles);

  Path<N> path = path_search(tree, robot, connect_position(tree, world, robot.position,
                                                           sc.params.neighbor_radius));
  robot.path_cursor = 1;

  const int max_ticks = static_cast<int>(std::llround(sc.max_time / sc.tick));
  int ticks = 0;
  if (trajectory_log) append_trajectory_row(*trajectory_log, 0.0, robot, obstacles);

  while (true) {
    if (robot.position == sc.goal) {
      result.success = true;
      break;
    }
    if (ticks >= max_ticks) {
      result.failure_reason = FailureReason::tick_budget;
      break;
    }
    ++ticks;
    const double now = static_cast<double>(ticks) * sc.tick;

    for (auto& o : obstacles) obstacle_step(o, sc.tick, sc.bounds, rng_obstacles);

    // A hazard sphere that contains the robot or the goal root cannot be
    // satisfied: the robot is already inside the margin, and every plan has
    // to end at the goal. Such a sphere shrinks to the largest radius that
    // still excludes both, so the constraint keeps all the margin that is
    // actually achievable and pushes the robot outward instead of
    // deadlocking the repair loop.
    const Sphere<N> lrz = reaction_zone(robot, sc.params);
    std::vector<Sphere<N>> cpr;
    for (const auto& o : obstacles) {
      Sphere<N> zone = hazard_zone(o, sc.robot_radius, sc.params);
      if (!lrz.intersects(zone)) continue;
      zone.radius = std::min(zone.radius,
                             distance(zone.center, robot.position) - 1e-9);
      zone.radius = std::min(zone.radius, distance(zone.center, sc.goal) - 1e-9);
      if (zone.radius > 0.0) cpr.push_back(zone);
    }
    const bool valid = (hooks && hooks->disable_replanning)
                           ? true
                           : validate_path(path, robot, cpr, sc.params);

    bool replan_failed = false;
    if (valid) {
      robot_step(robot, path, sc.tick);
    } else {
      const auto t0 = std::chrono::steady_clock::now();
      RepairBudget budget;
      budget.max_fallback_samples = sc.max_repair_samples;
      if (enforce_budget)
        budget.deadline = t0 + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                   std::chrono::duration<double>(sc.tick));

      const PruneResult pruned = prune_tree(tree, partition, cpr, path.node_ids);
      if (hooks && hooks->after_prune) hooks->after_prune(tree, partition, cpr);

      RepairResult rep = repair_tree(tree, partition, robot, cpr, world, sc.params,
                                     rng_repair, pruned.pruned_path, budget);
      ReplanEvent event;
      event.tick_time = now;
      event.cpr_spheres = static_cast<int>(cpr.size());
      event.pruned_nodes = static_cast<int>(pruned.pruned.size());
      event.search_passes = rep.search_passes;
      event.reconnections = rep.reconnections;
      event.fallback_samples = rep.fallback_samples;

      if (rep.success) {
        tree.rewire_cascade(rep.seeds, sc.params.neighbor_radius, world, cpr);
        path = path_search(tree, robot, rep.entry);
        robot.path_cursor = 1;
        if (hooks && hooks->after_replan) hooks->after_replan(tree, partition, path, cpr);
        const RestoreReport restored = restore_tree(tree, partition, world, sc.params);
        if (hooks && hooks->after_restore) hooks->after_restore(tree, partition, restored);
      }
      event.subtree_count = static_cast<int>(partition.count());

      const double ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
      event.duration_ms = enforce_budget ? ms : 0.0;
      result.replan_events.push_back(event);

      if (!rep.success || (enforce_budget && ms > sc.tick * 1000.0))
        replan_failed = true;
      // Robot holds position for the replanning tick.
    }

    if (trajectory_log) append_trajectory_row(*trajectory_log, now, robot, obstacles);
    if (hooks && hooks->on_tick) hooks->on_tick(ticks, robot, obstacles);

    if (collision_check(robot, obstacles)) {
      result.failure_reason = FailureReason::collision;
      break;
    }
    if (replan_failed) {
      result.failure_reason = FailureReason::replan_timeout;
      break;
    }
  }

  result.travel_time = static_cast<double>(ticks) * sc.tick;
  return result;
}

}  // namespace replan
