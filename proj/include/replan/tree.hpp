#pragma once

#include <algorithm>
#include <cassert>
#include <charconv>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "replan/errors.hpp"
#include "replan/geometry.hpp"
#include "replan/grid_index.hpp"

namespace replan {

enum class NodeStatus : std::uint8_t { active, pruned };

template <int N>
struct NodeRecord {
  Vec<N> position{};
  NodeId parent = kNoNode;
  std::vector<NodeId> children;
  std::int32_t subtree = 0;
  /// Tree-path length to the goal root; defined only while the node's
  /// parent chain reaches the goal-rooted subtree.
  std::optional<double> cost_to_go;
  NodeStatus status = NodeStatus::active;
  /// Parent at prune time, the preferred reattachment point on restore.
  NodeId restore_parent = kNoNode;

  bool active() const { return status == NodeStatus::active; }
};

/// Workspace box plus the obstacles that never move. Dynamic obstacles are
/// handled by the replanner; everything here is fixed for a whole trial.
template <int N>
struct StaticWorld {
  Bounds<N> bounds{};
  std::vector<Sphere<N>> obstacles;

  bool point_clear(const Vec<N>& p) const {
    for (const auto& s : obstacles)
      if (s.contains(p)) return false;
    return true;
  }
  bool segment_clear(const Vec<N>& a, const Vec<N>& b) const {
    for (const auto& s : obstacles)
      if (segment_intersects_sphere(a, b, s)) return false;
    return true;
  }
};

inline void format_double(std::string& out, double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

/// Goal-rooted planning tree over an arena of nodes with stable integer
/// identifiers. Pruning flips status instead of deallocating, so identity
/// survives prune/restore cycles. The spatial index tracks active nodes
/// only.
///
/// Single-writer: all mutations happen on one logical thread per instance.
template <int N>
class Tree {
 public:
  Tree(const Bounds<N>& bounds, double index_cell)
      : bounds_(bounds), index_(bounds, index_cell) {}

  NodeId add_root(const Vec<N>& position) {
    assert(nodes_.empty());
    NodeRecord<N> rec;
    rec.position = position;
    rec.cost_to_go = 0.0;
    nodes_.push_back(std::move(rec));
    index_.insert(0, position);
    return 0;
  }

  /// New active node attached under `parent`. Inherits the parent's subtree
  /// index; cost follows when the parent chain reaches the goal.
  NodeId insert(const Vec<N>& position, NodeId parent) {
    assert(parent >= 0 && node(parent).active());
    const auto id = static_cast<NodeId>(nodes_.size());
    NodeRecord<N> rec;
    rec.position = position;
    rec.parent = parent;
    rec.subtree = nodes_[parent].subtree;
    if (rec.subtree == 0 && nodes_[parent].cost_to_go)
      rec.cost_to_go = *nodes_[parent].cost_to_go + distance(position, nodes_[parent].position);
    nodes_.push_back(std::move(rec));
    nodes_[parent].children.push_back(id);
    index_.insert(id, position);
    note_edge(position, nodes_[parent].position);
    return id;
  }

  NodeId goal_root() const { return 0; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t active_count() const { return index_.size(); }
  const NodeRecord<N>& node(NodeId id) const { return nodes_[id]; }
  std::span<const NodeRecord<N>> nodes() const { return nodes_; }
  const Bounds<N>& bounds() const { return bounds_; }

  /// Longest edge ever created; a conservative bound used to window edge
  /// queries (it never shrinks when edges are removed).
  double max_edge_length() const { return max_edge_; }

  NodeId nearest(const Vec<N>& p) const {
    NodeId id = index_.nearest(p);
    if (id == kNoNode) throw StateError("nearest: tree has no active nodes");
    return id;
  }

  /// Active nodes within the closed radius, sorted by id.
  void near(const Vec<N>& p, double radius, std::vector<NodeId>& out) const {
    index_.radius_query(p, radius, out);
  }
  std::vector<NodeId> near(const Vec<N>& p, double radius) const {
    std::vector<NodeId> out;
    near(p, radius, out);
    return out;
  }

  void attach(NodeId child, NodeId parent) {
    assert(nodes_[child].parent == kNoNode && child != parent);
    nodes_[child].parent = parent;
    nodes_[parent].children.push_back(child);
    note_edge(nodes_[child].position, nodes_[parent].position);
  }

  void detach(NodeId child) {
    NodeId p = nodes_[child].parent;
    if (p == kNoNode) return;
    auto& siblings = nodes_[p].children;
    siblings.erase(std::find(siblings.begin(), siblings.end(), child));
    nodes_[child].parent = kNoNode;
  }

  void reparent(NodeId child, NodeId new_parent) {
    detach(child);
    attach(child, new_parent);
  }

  /// Flips `id` to pruned: removed from the index, detached from its parent
  /// (recorded for restore), edges to children dropped by the caller.
  void prune_node(NodeId id, NodeId recorded_parent) {
    auto& rec = nodes_[id];
    assert(rec.active());
    rec.restore_parent = recorded_parent;
    detach(id);
    rec.status = NodeStatus::pruned;
    rec.cost_to_go.reset();
    index_.remove(id, rec.position);
  }

  /// Reactivates a pruned node as a leaf under `parent`. Costs are left
  /// undefined; the caller recomputes them once restoration finishes.
  void reactivate(NodeId id, NodeId parent) {
    auto& rec = nodes_[id];
    assert(!rec.active() && nodes_[parent].active());
    rec.status = NodeStatus::active;
    rec.subtree = nodes_[parent].subtree;
    rec.cost_to_go.reset();
    rec.restore_parent = kNoNode;
    attach(id, parent);
    index_.insert(id, rec.position);
  }

  /// Assigns `index` to the root and all active descendants. Nonzero
  /// indices invalidate cost_to_go (cost is defined only on the goal
  /// subtree); assigning 0 leaves costs for the caller to fill.
  void set_subtree_index(NodeId root, std::int32_t index) {
    walk_active(root, [&](NodeRecord<N>& rec) {
      rec.subtree = index;
      if (index != 0) rec.cost_to_go.reset();
    });
  }

  /// Merges the fragment rooted at `fragment_root` (already attached under
  /// a goal-subtree parent) into subtree 0, computing costs down the chain.
  void adopt_into_goal(NodeId fragment_root) {
    assert(nodes_[fragment_root].parent != kNoNode);
    assert(nodes_[nodes_[fragment_root].parent].subtree == 0);
    walk_active(fragment_root, [&](NodeRecord<N>& rec) {
      rec.subtree = 0;
      const auto& par = nodes_[rec.parent];
      rec.cost_to_go = *par.cost_to_go + distance(rec.position, par.position);
    });
  }

  /// Recomputes cost = parent cost + edge length for the whole active
  /// subtree under `from` (inclusive).
  void refresh_costs(NodeId from) {
    walk_active(from, [&](NodeRecord<N>& rec) {
      const auto& par = nodes_[rec.parent];
      rec.cost_to_go = *par.cost_to_go + distance(rec.position, par.position);
    });
  }

  /// Resets subtree index and cost over everything reachable from the goal
  /// root. Active nodes not reachable from it are untouched.
  void recompute_from_root() {
    nodes_[0].subtree = 0;
    nodes_[0].cost_to_go = 0.0;
    walk_active(0, [&](NodeRecord<N>& rec) {
      rec.subtree = 0;
      const auto& par = nodes_[rec.parent];
      rec.cost_to_go = *par.cost_to_go + distance(rec.position, par.position);
    }, /*include_root=*/false);
  }

  /// Reverses the parent chain so `new_root` becomes the root of its
  /// fragment; everything hanging off the chain is untouched.
  void reroot(NodeId new_root) {
    std::vector<NodeId> chain;
    for (NodeId x = new_root; x != kNoNode; x = nodes_[x].parent) chain.push_back(x);
    for (std::size_t i = 1; i < chain.size(); ++i) {
      auto& siblings = nodes_[chain[i]].children;
      siblings.erase(std::find(siblings.begin(), siblings.end(), chain[i - 1]));
      nodes_[chain[i - 1]].parent = kNoNode;
    }
    for (std::size_t i = 1; i < chain.size(); ++i) {
      nodes_[chain[i]].parent = chain[i - 1];
      nodes_[chain[i - 1]].children.push_back(chain[i]);
    }
  }

  std::vector<NodeId> collect_subtree(NodeId root) const {
    std::vector<NodeId> out{root};
    for (std::size_t i = 0; i < out.size(); ++i)
      for (NodeId c : nodes_[out[i]].children)
        if (nodes_[c].active()) out.push_back(c);
    return out;
  }

  /// Queue-driven cost-improvement pass over the goal subtree. Any node
  /// whose cost drops is re-examined as a source. Edges must clear the
  /// static obstacles and every `forbidden` sphere. Costs never increase
  /// and strict decreases bound the loop.
  void rewire_cascade(std::span<const NodeId> seeds, double radius,
                      const StaticWorld<N>& world,
                      std::span<const Sphere<N>> forbidden) {
    std::deque<NodeId> queue;
    for (NodeId s : seeds) {
      assert(nodes_[s].active() && nodes_[s].subtree == 0 && nodes_[s].cost_to_go);
      queue.push_back(s);
    }
    std::vector<NodeId> nbrs;
    while (!queue.empty()) {
      NodeId u = queue.front();
      queue.pop_front();
      if (!nodes_[u].active() || nodes_[u].subtree != 0) continue;
      if (rewire_pass(u, radius, world, forbidden, nbrs, &queue)) continue;
    }
  }

  /// Single improvement pass around one node (no propagation to improved
  /// neighbors). Returns true if anything changed.
  bool rewire_neighbors(NodeId u, double radius, const StaticWorld<N>& world,
                        std::span<const Sphere<N>> forbidden) {
    std::vector<NodeId> nbrs;
    return rewire_pass(u, radius, world, forbidden, nbrs, nullptr);
  }

  /// Line-delimited snapshot: id, coordinates, parent, subtree, cost ("-"
  /// when undefined), status.
  void write_snapshot(std::ostream& os) const {
    std::string line;
    for (std::size_t id = 0; id < nodes_.size(); ++id) {
      const auto& rec = nodes_[id];
      line.clear();
      line += std::to_string(id);
      for (int i = 0; i < N; ++i) {
        line += ' ';
        format_double(line, rec.position[i]);
      }
      line += ' ';
      line += std::to_string(rec.parent);
      line += ' ';
      line += std::to_string(rec.subtree);
      line += ' ';
      if (rec.cost_to_go)
        format_double(line, *rec.cost_to_go);
      else
        line += '-';
      line += ' ';
      line += rec.active() ? "active" : "pruned";
      line += '\n';
      os << line;
    }
  }

 private:
  template <typename Fn>
  void walk_active(NodeId root, Fn&& fn, bool include_root = true) {
    // Applies fn to every active node below root, parents before children.
    std::vector<NodeId> stack{root};
    while (!stack.empty()) {
      NodeId x = stack.back();
      stack.pop_back();
      if (!nodes_[x].active()) continue;
      if (include_root || x != root) fn(nodes_[x]);
      for (NodeId c : nodes_[x].children) stack.push_back(c);
    }
  }

  bool rewire_pass(NodeId u, double radius, const StaticWorld<N>& world,
                   std::span<const Sphere<N>> forbidden,
                   std::vector<NodeId>& nbrs, std::deque<NodeId>* queue) {
    bool changed = false;
    const double base = *nodes_[u].cost_to_go;
    near(nodes_[u].position, radius, nbrs);
    for (NodeId w : nbrs) {
      if (w == u) continue;
      auto& rec = nodes_[w];
      if (rec.subtree != 0 || !rec.cost_to_go) continue;
      const double candidate = base + distance(nodes_[u].position, rec.position);
      if (candidate >= *rec.cost_to_go) continue;
      if (!world.segment_clear(nodes_[u].position, rec.position)) continue;
      bool blocked = false;
      for (const auto& s : forbidden)
        if (segment_intersects_sphere(nodes_[u].position, rec.position, s)) {
          blocked = true;
          break;
        }
      if (blocked) continue;
      reparent(w, u);
      refresh_costs(w);
      changed = true;
      if (queue) queue->push_back(w);
    }
    return changed;
  }

  void note_edge(const Vec<N>& a, const Vec<N>& b) {
    max_edge_ = std::max(max_edge_, distance(a, b));
  }

  Bounds<N> bounds_;
  GridIndex<N> index_;
  std::vector<NodeRecord<N>> nodes_;
  double max_edge_ = 0.0;
};

/// Standard RRT* construction over the static world, rooted at the goal:
/// sample free space, steer from the nearest node, pick the cheapest
/// feasible parent in the neighborhood, insert, rewire the neighborhood.
template <int N>
Tree<N> build_initial_tree(const StaticWorld<N>& world, const Vec<N>& goal,
                           int iterations, double steer_range,
                           double near_radius, RandomStream& rng) {
  if (!world.bounds.contains(goal) || !world.point_clear(goal))
    throw ConfigError("goal lies outside the workspace or inside a static obstacle");
  Tree<N> tree(world.bounds, near_radius);
  tree.add_root(goal);
  std::vector<NodeId> nbrs;
  for (int it = 0; it < iterations; ++it) {
    Vec<N> target = sample_uniform(world.bounds, rng);
    for (int tries = 0; tries < 64 && !world.point_clear(target); ++tries)
      target = sample_uniform(world.bounds, rng);
    const NodeId anchor = tree.nearest(target);
    const Vec<N> pos = steer(tree.node(anchor).position, target, steer_range);
    if (!world.point_clear(pos)) continue;

    tree.near(pos, near_radius, nbrs);
    NodeId best = kNoNode;
    double best_cost = std::numeric_limits<double>::infinity();
    for (NodeId cand : nbrs) {
      const auto& rec = tree.node(cand);
      const double c = *rec.cost_to_go + distance(rec.position, pos);
      if (c < best_cost && world.segment_clear(rec.position, pos)) {
        best_cost = c;
        best = cand;
      }
    }
    if (best == kNoNode) continue;
    const NodeId id = tree.insert(pos, best);

    for (NodeId w : nbrs) {
      const auto& rec = tree.node(w);
      if (best_cost + distance(pos, rec.position) < *rec.cost_to_go &&
          world.segment_clear(pos, rec.position)) {
        tree.reparent(w, id);
        tree.refresh_costs(w);
      }
    }
  }
  return tree;
}

}  // namespace replan
