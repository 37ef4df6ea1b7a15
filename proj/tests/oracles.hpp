#pragma once

// Test-only reference implementations, independent of the library's query
// and bookkeeping paths.

#include <limits>
#include <queue>
#include <vector>

#include "replan/replanner.hpp"
#include "replan/tree.hpp"

namespace replan::oracle {

/// Dense-sampling segment/sphere test: 1000 points along the segment.
template <int N>
bool segment_hits_sphere_sampled(const Vec<N>& a, const Vec<N>& b, const Sphere<N>& s) {
  for (int i = 0; i < 1000; ++i) {
    const double t = static_cast<double>(i) / 999.0;
    if (s.contains(a + t * (b - a))) return true;
  }
  return false;
}

/// Guaranteed upper bound on how far the sampled minimum distance can sit
/// above the true minimum; instances closer than this to tangency are
/// ambiguous for the sampled oracle.
template <int N>
double sampled_oracle_error_bound(const Vec<N>& a, const Vec<N>& b, double dist) {
  const double step = 1.0 / 999.0;
  const double quad = (b - a).norm_sq() * step * step * 0.25;
  return quad / (2.0 * std::max(dist, 1e-9)) + 1e-12;
}

/// Linear-scan nearest over active nodes (ties by id).
template <int N>
NodeId nearest_scan(const Tree<N>& tree, const Vec<N>& p) {
  NodeId best = kNoNode;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < tree.size(); ++i) {
    const auto& rec = tree.node(static_cast<NodeId>(i));
    if (!rec.active()) continue;
    const double d = distance(rec.position, p);
    if (d < best_d) {
      best_d = d;
      best = static_cast<NodeId>(i);
    }
  }
  return best;
}

/// Linear-scan closed-radius query over active nodes, sorted by id.
template <int N>
std::vector<NodeId> near_scan(const Tree<N>& tree, const Vec<N>& p, double radius) {
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < tree.size(); ++i) {
    const auto& rec = tree.node(static_cast<NodeId>(i));
    if (rec.active() && distance(rec.position, p) <= radius)
      out.push_back(static_cast<NodeId>(i));
  }
  return out;
}

/// Single-source shortest path over the active parent/child edge set,
/// from the goal root. Unreachable nodes get infinity.
template <int N>
std::vector<double> shortest_path_costs(const Tree<N>& tree) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(tree.size(), inf);
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[tree.goal_root()] = 0.0;
  heap.push({0.0, tree.goal_root()});
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    const auto& rec = tree.node(u);
    std::vector<NodeId> adjacent = rec.children;
    if (rec.parent != kNoNode) adjacent.push_back(rec.parent);
    for (NodeId v : adjacent) {
      if (!tree.node(v).active()) continue;
      const double nd = d + distance(rec.position, tree.node(v).position);
      if (nd < dist[v]) {
        dist[v] = nd;
        heap.push({nd, v});
      }
    }
  }
  return dist;
}

/// Active descendants of `root` via breadth-first reachability over
/// children links.
template <int N>
std::vector<NodeId> reachable_set(const Tree<N>& tree, NodeId root) {
  std::vector<NodeId> out{root};
  for (std::size_t i = 0; i < out.size(); ++i)
    for (NodeId c : tree.node(out[i]).children)
      if (tree.node(c).active()) out.push_back(c);
  std::sort(out.begin(), out.end());
  return out;
}

// --- structural invariant checks -------------------------------------------

/// Parent/child symmetry: n is in parent(n).children exactly once, and
/// every child lists n as its parent.
template <int N>
bool parent_child_consistent(const Tree<N>& tree) {
  for (std::size_t i = 0; i < tree.size(); ++i) {
    const auto id = static_cast<NodeId>(i);
    const auto& rec = tree.node(id);
    if (rec.parent != kNoNode) {
      const auto& kids = tree.node(rec.parent).children;
      if (std::count(kids.begin(), kids.end(), id) != 1) return false;
    }
    for (NodeId c : rec.children)
      if (tree.node(c).parent != id) return false;
  }
  return true;
}

/// Following parent links from any active node reaches a parentless root
/// within |nodes| steps.
template <int N>
bool acyclic(const Tree<N>& tree) {
  for (std::size_t i = 0; i < tree.size(); ++i) {
    if (!tree.node(static_cast<NodeId>(i)).active()) continue;
    NodeId x = static_cast<NodeId>(i);
    std::size_t steps = 0;
    while (tree.node(x).parent != kNoNode) {
      x = tree.node(x).parent;
      if (++steps > tree.size()) return false;
    }
  }
  return true;
}

/// Every active node's subtree index matches its chain root's index, and
/// that root is registered in the partition.
template <int N>
bool partition_sound(const Tree<N>& tree, const SubtreePartition& partition) {
  for (std::size_t i = 0; i < tree.size(); ++i) {
    const auto id = static_cast<NodeId>(i);
    const auto& rec = tree.node(id);
    if (!rec.active()) continue;
    NodeId x = id;
    std::size_t steps = 0;
    while (tree.node(x).parent != kNoNode) {
      x = tree.node(x).parent;
      if (++steps > tree.size()) return false;
    }
    const auto it = partition.roots.find(rec.subtree);
    if (it == partition.roots.end()) return false;
    if (it->second != x) return false;
    if (tree.node(x).subtree != rec.subtree) return false;
  }
  return true;
}

/// cost_to_go equals parent cost plus edge length throughout subtree 0.
template <int N>
bool costs_consistent(const Tree<N>& tree, double tol = 1e-9) {
  for (std::size_t i = 0; i < tree.size(); ++i) {
    const auto& rec = tree.node(static_cast<NodeId>(i));
    if (!rec.active() || rec.subtree != 0) continue;
    if (!rec.cost_to_go) return false;
    if (rec.parent == kNoNode) {
      if (*rec.cost_to_go != 0.0) return false;
      continue;
    }
    const auto& par = tree.node(rec.parent);
    if (!par.cost_to_go) return false;
    const double expect = *par.cost_to_go + distance(rec.position, par.position);
    if (std::abs(expect - *rec.cost_to_go) > tol) return false;
  }
  return true;
}

}  // namespace replan::oracle
