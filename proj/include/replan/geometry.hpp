#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <utility>

#include "replan/rng.hpp"

namespace replan {

/// Point / displacement in N-dimensional Euclidean space (meters).
/// 2D scenarios use Vec<2> directly; there is no zero-padded third axis.
template <int N>
struct Vec {
  std::array<double, N> c{};

  double& operator[](int i) { return c[i]; }
  double operator[](int i) const { return c[i]; }

  friend Vec operator+(const Vec& a, const Vec& b) {
    Vec r;
    for (int i = 0; i < N; ++i) r.c[i] = a.c[i] + b.c[i];
    return r;
  }
  friend Vec operator-(const Vec& a, const Vec& b) {
    Vec r;
    for (int i = 0; i < N; ++i) r.c[i] = a.c[i] - b.c[i];
    return r;
  }
  friend Vec operator*(double s, const Vec& a) {
    Vec r;
    for (int i = 0; i < N; ++i) r.c[i] = s * a.c[i];
    return r;
  }
  friend bool operator==(const Vec& a, const Vec& b) { return a.c == b.c; }

  double dot(const Vec& o) const {
    double s = 0;
    for (int i = 0; i < N; ++i) s += c[i] * o.c[i];
    return s;
  }
  double norm_sq() const { return dot(*this); }
  double norm() const { return std::sqrt(norm_sq()); }
};

using Vec2 = Vec<2>;
using Vec3 = Vec<3>;

template <int N>
double distance(const Vec<N>& p, const Vec<N>& q) {
  return (p - q).norm();
}

/// Closed ball: a disk in 2D, a sphere in 3D. Used for obstacle bodies and
/// for every hazard/pruning/search region.
template <int N>
struct Sphere {
  Vec<N> center{};
  double radius = 0.0;

  bool contains(const Vec<N>& p) const { return distance(center, p) <= radius; }

  /// Closed-set overlap test: contact at exactly the radius sum counts.
  bool intersects(const Sphere& o) const {
    return distance(center, o.center) <= radius + o.radius;
  }
};

/// Axis-aligned box workspace.
template <int N>
struct Bounds {
  Vec<N> min{};
  Vec<N> max{};

  bool contains(const Vec<N>& p) const {
    for (int i = 0; i < N; ++i)
      if (p[i] < min[i] || p[i] > max[i]) return false;
    return true;
  }
  Vec<N> clamp(const Vec<N>& p) const {
    Vec<N> r;
    for (int i = 0; i < N; ++i) r[i] = std::clamp(p[i], min[i], max[i]);
    return r;
  }
  double extent(int i) const { return max[i] - min[i]; }
  double diameter() const { return (max - min).norm(); }
};

/// Distance from p to the closed segment ab.
template <int N>
double point_segment_distance(const Vec<N>& p, const Vec<N>& a, const Vec<N>& b) {
  const Vec<N> ab = b - a;
  const double len_sq = ab.norm_sq();
  if (len_sq == 0.0) return distance(p, a);
  const double t = std::clamp((p - a).dot(ab) / len_sq, 0.0, 1.0);
  return distance(p, a + t * ab);
}

/// True iff the closed segment ab comes within s.radius (inclusive) of
/// s.center. Analytic closest-point test; a degenerate segment reduces to a
/// point-in-sphere check.
template <int N>
bool segment_intersects_sphere(const Vec<N>& a, const Vec<N>& b, const Sphere<N>& s) {
  return point_segment_distance(s.center, a, b) <= s.radius;
}

/// Portion of segment ab inside the sphere, or nullopt if they are disjoint.
template <int N>
std::optional<std::pair<Vec<N>, Vec<N>>> clip_segment_to_sphere(
    const Vec<N>& a, const Vec<N>& b, const Sphere<N>& s) {
  const Vec<N> d = b - a;
  const double dd = d.norm_sq();
  if (dd == 0.0) {
    if (s.contains(a)) return std::make_pair(a, a);
    return std::nullopt;
  }
  const Vec<N> m = a - s.center;
  // |m + t d|^2 <= r^2
  const double pb = m.dot(d);
  const double pc = m.norm_sq() - s.radius * s.radius;
  const double disc = pb * pb - dd * pc;
  if (disc < 0.0) return std::nullopt;
  const double sq = std::sqrt(disc);
  const double lo = std::max(0.0, (-pb - sq) / dd);
  const double hi = std::min(1.0, (-pb + sq) / dd);
  if (lo > hi) return std::nullopt;
  return std::make_pair(a + lo * d, a + hi * d);
}

/// Uniform sample over the box; consumes exactly N draws.
template <int N>
Vec<N> sample_uniform(const Bounds<N>& bounds, RandomStream& rng) {
  Vec<N> p;
  for (int i = 0; i < N; ++i) p[i] = rng.uniform(bounds.min[i], bounds.max[i]);
  return p;
}

/// Returns `to` when within `range` of `from`, otherwise the point at
/// distance `range` along the from->to direction.
template <int N>
Vec<N> steer(const Vec<N>& from, const Vec<N>& to, double range) {
  const Vec<N> d = to - from;
  const double len = d.norm();
  if (len <= range) return to;
  return from + (range / len) * d;
}

}  // namespace replan
