#pragma once

#include <cstdint>

#include "replan/geometry.hpp"

namespace replan {

/// 2D obstacles travel along a heading for a sampled distance, then pick a
/// new heading and distance.
struct HeadingMotion {
  double heading = 0.0;    // radians
  double remaining = 0.0;  // meters left on the current leg
};

/// 3D obstacles travel toward a sampled waypoint, then pick a new one.
template <int N>
struct WaypointMotion {
  Vec<N> waypoint{};
};

template <int N>
struct ObstacleMotion;
template <>
struct ObstacleMotion<2> : HeadingMotion {};
template <>
struct ObstacleMotion<3> : WaypointMotion<3> {};

template <int N>
struct Obstacle {
  std::int32_t id = 0;
  Vec<N> center{};
  double radius = 0.0;
  double speed = 0.0;  // m/s, constant per trial
  ObstacleMotion<N> motion{};
};

/// Holonomic robot following the current path by arc length.
template <int N>
struct RobotState {
  Vec<N> position{};
  double speed = 0.0;   // m/s
  double radius = 0.0;  // m
  std::size_t path_cursor = 1;  // index of the next waypoint to reach
};

}  // namespace replan
