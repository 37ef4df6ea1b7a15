#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "replan/errors.hpp"
#include "replan/geometry.hpp"

namespace replan {

using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;

/// Uniform-grid point index over a bounded workspace, supporting insert,
/// remove, closed-radius queries and nearest lookup. Buckets hold (id,
/// position) pairs; removal swaps with the back, queries sort results by id
/// so downstream behavior never depends on bucket order.
template <int N>
class GridIndex {
 public:
  GridIndex(const Bounds<N>& bounds, double cell_size)
      : bounds_(bounds), cell_(cell_size) {
    std::size_t total = 1;
    for (int i = 0; i < N; ++i) {
      dims_[i] = std::max<std::int64_t>(
          1, static_cast<std::int64_t>(bounds.extent(i) / cell_) + 1);
      total *= static_cast<std::size_t>(dims_[i]);
    }
    cells_.resize(total);
  }

  std::size_t size() const { return count_; }

  void insert(NodeId id, const Vec<N>& p) {
    cells_[flat_index(p)].push_back({id, p});
    ++count_;
  }

  void remove(NodeId id, const Vec<N>& p) {
    auto& bucket = cells_[flat_index(p)];
    for (std::size_t i = 0; i < bucket.size(); ++i) {
      if (bucket[i].id == id) {
        bucket[i] = bucket.back();
        bucket.pop_back();
        --count_;
        return;
      }
    }
    throw StateError("grid index: removing an id that is not present");
  }

  /// All ids within closed `radius` of p, sorted ascending.
  void radius_query(const Vec<N>& p, double radius, std::vector<NodeId>& out) const {
    out.clear();
    const double r_sq = radius * radius;
    visit_range(p, radius, [&](const Entry& e) {
      if ((e.pos - p).norm_sq() <= r_sq) out.push_back(e.id);
    });
    std::sort(out.begin(), out.end());
  }

  /// Closest id to p (ties by smaller id); kNoNode when empty.
  NodeId nearest(const Vec<N>& p) const {
    if (count_ == 0) return kNoNode;
    double radius = cell_;
    const double limit = bounds_.diameter() + cell_;
    NodeId best = kNoNode;
    double best_sq = std::numeric_limits<double>::infinity();
    while (true) {
      visit_range(p, radius, [&](const Entry& e) {
        const double d_sq = (e.pos - p).norm_sq();
        if (d_sq < best_sq || (d_sq == best_sq && e.id < best)) {
          best_sq = d_sq;
          best = e.id;
        }
      });
      // A hit found within the scanned box is only confirmed nearest once
      // the scan radius covers its distance. Once the scan spans the whole
      // workspace every entry has been visited.
      if (best != kNoNode && best_sq <= radius * radius) return best;
      if (radius > limit) return best;
      radius *= 2.0;
    }
  }

 private:
  struct Entry {
    NodeId id;
    Vec<N> pos;
  };

  std::int64_t axis_cell(double v, int i) const {
    auto idx = static_cast<std::int64_t>((v - bounds_.min[i]) / cell_);
    return std::clamp<std::int64_t>(idx, 0, dims_[i] - 1);
  }

  std::size_t flat_index(const Vec<N>& p) const {
    std::size_t idx = 0;
    for (int i = N - 1; i >= 0; --i)
      idx = idx * static_cast<std::size_t>(dims_[i]) +
            static_cast<std::size_t>(axis_cell(p[i], i));
    return idx;
  }

  template <typename Fn>
  void visit_range(const Vec<N>& p, double radius, Fn&& fn) const {
    std::array<std::int64_t, N> lo, hi;
    for (int i = 0; i < N; ++i) {
      lo[i] = axis_cell(p[i] - radius, i);
      hi[i] = axis_cell(p[i] + radius, i);
    }
    std::array<std::int64_t, N> cur = lo;
    while (true) {
      std::size_t idx = 0;
      for (int i = N - 1; i >= 0; --i)
        idx = idx * static_cast<std::size_t>(dims_[i]) +
              static_cast<std::size_t>(cur[i]);
      for (const Entry& e : cells_[idx]) fn(e);
      int axis = 0;
      while (axis < N) {
        if (++cur[axis] <= hi[axis]) break;
        cur[axis] = lo[axis];
        ++axis;
      }
      if (axis == N) break;
    }
  }

  Bounds<N> bounds_;
  double cell_;
  std::array<std::int64_t, N> dims_{};
  std::vector<std::vector<Entry>> cells_;
  std::size_t count_ = 0;
};

}  // namespace replan
