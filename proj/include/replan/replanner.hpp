#pragma once

#include <algorithm>
#include <chrono>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "replan/entities.hpp"
#include "replan/errors.hpp"
#include "replan/tree.hpp"

namespace replan {

/// Replanning parameters. Defaults are the 2D study values; 3D runs raise
/// init_iterations to 20000.
struct Params {
  double risk_horizon = 0.4;      // s, scales obstacle hazard zones (OHZ)
  double reaction_horizon = 1.0;  // s, scales the robot reaction zone (LRZ)
  double lsr_initial_radius = 1.0;   // m
  double lsr_expansion = 1.5;        // > 1
  double lsr_max_radius = 10.0;      // m
  double neighbor_radius = 1.7;      // m, node neighborhood and connection radius
  double steer_range = 1.0;          // m
  int init_iterations = 2500;

  void validate() const {
    if (risk_horizon <= 0 || reaction_horizon <= 0 || lsr_initial_radius <= 0 ||
        lsr_max_radius <= 0 || neighbor_radius <= 0 || steer_range <= 0 ||
        init_iterations <= 0)
      throw ConfigError("params: all values must be positive");
    if (lsr_expansion <= 1.0)
      throw ConfigError("params: lsr_expansion must exceed 1");
    if (lsr_initial_radius >= lsr_max_radius)
      throw ConfigError("params: lsr_initial_radius must be below lsr_max_radius");
  }
};

/// The disjoint subtrees produced by pruning. Index 0 is always the
/// goal-rooted subtree; other indices are assigned once and never reused.
struct SubtreePartition {
  std::map<std::int32_t, NodeId> roots;
  std::int32_t next_index = 1;

  std::int32_t allocate(NodeId root) {
    const std::int32_t idx = next_index++;
    roots.emplace(idx, root);
    return idx;
  }
  std::size_t count() const { return roots.size(); }
};

/// Waypoint polyline from the robot position to the goal. node_ids runs
/// parallel to waypoints; the first entry (the robot position) has no node.
template <int N>
struct Path {
  std::vector<Vec<N>> waypoints;
  std::vector<NodeId> node_ids;

  double length() const {
    double s = 0;
    for (std::size_t i = 1; i < waypoints.size(); ++i)
      s += distance(waypoints[i - 1], waypoints[i]);
    return s;
  }
};

/// A node with at least one eligible neighbor (an active node of another
/// subtree joined by a feasible edge), plus the nearest such neighbor.
struct HotNodeEntry {
  NodeId node = kNoNode;
  NodeId best_neighbor = kNoNode;
  double utility = 0.0;
};

// --- hazard geometry ------------------------------------------------------

/// LRZ: ball around the robot reachable within the reaction horizon.
template <int N>
Sphere<N> reaction_zone(const RobotState<N>& robot, const Params& p) {
  return {robot.position, robot.speed * p.reaction_horizon};
}

/// OHZ: ball around an obstacle inflated by its travel over the risk
/// horizon plus both body radii (the robot is then treated as a point).
template <int N>
Sphere<N> hazard_zone(const Obstacle<N>& obstacle, double robot_radius, const Params& p) {
  return {obstacle.center, obstacle.speed * p.risk_horizon + obstacle.radius + robot_radius};
}

/// CPR: hazard zones of every obstacle whose OHZ overlaps the robot's LRZ.
/// The union is kept as a sphere list and evaluated per test, never
/// rasterized.
template <int N>
std::vector<Sphere<N>> pruning_region(const RobotState<N>& robot,
                                      const std::vector<Obstacle<N>>& obstacles,
                                      const Params& p) {
  const Sphere<N> lrz = reaction_zone(robot, p);
  std::vector<Sphere<N>> cpr;
  for (const auto& o : obstacles) {
    const Sphere<N> ohz = hazard_zone(o, robot.radius, p);
    if (lrz.intersects(ohz)) cpr.push_back(ohz);
  }
  return cpr;
}

template <int N>
bool point_in_any(const Vec<N>& p, const std::vector<Sphere<N>>& spheres) {
  for (const auto& s : spheres)
    if (s.contains(p)) return true;
  return false;
}

template <int N>
bool segment_hits_any(const Vec<N>& a, const Vec<N>& b, const std::vector<Sphere<N>>& spheres) {
  for (const auto& s : spheres)
    if (segment_intersects_sphere(a, b, s)) return true;
  return false;
}

/// Edge feasibility during a replanning event: clear of static obstacles
/// and of every CPR sphere. Distant obstacles are left to later
/// validations.
template <int N>
bool edge_feasible(const StaticWorld<N>& world, const std::vector<Sphere<N>>& cpr,
                   const Vec<N>& a, const Vec<N>& b) {
  return world.segment_clear(a, b) && !segment_hits_any(a, b, cpr);
}

// --- validation -----------------------------------------------------------

/// Hazard spheres that already contain the robot cannot be avoided by any
/// immediate action; validation and the robot's entry connection treat them
/// as non-constraining for the current tick so the robot can move out of
/// the margin instead of freezing. Tree pruning and tree edges stay
/// strictly hazard-free.
template <int N>
std::vector<Sphere<N>> avoidable_hazards(const std::vector<Sphere<N>>& cpr,
                                         const Vec<N>& robot_pos) {
  std::vector<Sphere<N>> out;
  out.reserve(cpr.size());
  for (const auto& s : cpr)
    if (!s.contains(robot_pos)) out.push_back(s);
  return out;
}

/// Checks the portion of the path ahead of the robot that lies inside the
/// LRZ: each segment is clipped to the LRZ sphere and the clipped piece is
/// tested against every avoidable CPR sphere.
template <int N>
bool validate_path(const Path<N>& path, const RobotState<N>& robot,
                   const std::vector<Sphere<N>>& cpr, const Params& p) {
  if (cpr.empty()) return true;
  const std::vector<Sphere<N>> active = avoidable_hazards(cpr, robot.position);
  if (active.empty()) return true;
  const Sphere<N> lrz = reaction_zone(robot, p);
  Vec<N> prev = robot.position;
  for (std::size_t i = robot.path_cursor; i < path.waypoints.size(); ++i) {
    const Vec<N>& next = path.waypoints[i];
    if (auto clipped = clip_segment_to_sphere(prev, next, lrz)) {
      if (segment_hits_any(clipped->first, clipped->second, active)) return false;
    }
    prev = next;
  }
  return true;
}

// --- pruning --------------------------------------------------------------

struct PruneResult {
  std::vector<NodeId> pruned;       // nodes flipped to pruned this event
  std::vector<NodeId> pruned_path;  // the subset that sat on the current path
};

/// Removes all tree content inside the CPR. Nodes inside any CPR sphere are
/// pruned with their incident edges; surviving edges that cross a sphere
/// are cut, orphaning the child side. Every fragment created this way
/// becomes a fresh disjoint subtree; costs outside subtree 0 become
/// undefined. The goal root is never pruned (the goal subtree must survive;
/// if its surroundings are hazardous the repair loop will fail the tick
/// instead).
template <int N>
PruneResult prune_tree(Tree<N>& tree, SubtreePartition& partition,
                       const std::vector<Sphere<N>>& cpr,
                       const std::vector<NodeId>& path_nodes) {
  PruneResult result;

  // Victim nodes: active nodes inside any sphere.
  std::vector<NodeId> victims, tmp;
  for (const auto& s : cpr) {
    tree.near(s.center, s.radius, tmp);
    victims.insert(victims.end(), tmp.begin(), tmp.end());
  }
  std::sort(victims.begin(), victims.end());
  victims.erase(std::unique(victims.begin(), victims.end()), victims.end());
  std::erase(victims, tree.goal_root());

  // Record parents before any edge is touched; pruning a parent first would
  // otherwise lose the child's restore attachment.
  std::vector<NodeId> victim_parents(victims.size());
  for (std::size_t i = 0; i < victims.size(); ++i)
    victim_parents[i] = tree.node(victims[i]).parent;

  for (std::size_t i = 0; i < victims.size(); ++i) {
    const NodeId u = victims[i];
    if (partition.roots.count(tree.node(u).subtree) &&
        partition.roots.at(tree.node(u).subtree) == u)
      partition.roots.erase(tree.node(u).subtree);
    tree.prune_node(u, victim_parents[i]);
    const std::vector<NodeId> children = tree.node(u).children;
    for (NodeId c : children) {
      tree.detach(c);
      if (tree.node(c).active()) {
        const std::int32_t idx = partition.allocate(c);
        tree.set_subtree_index(c, idx);
      }
    }
  }
  result.pruned = victims;

  // Surviving edges crossing a sphere: both endpoints of any such edge lie
  // within radius + the longest edge of the sphere center.
  std::vector<NodeId> cut;
  const double window = tree.max_edge_length();
  for (const auto& s : cpr) {
    tree.near(s.center, s.radius + window, tmp);
    for (NodeId w : tmp) {
      const NodeId par = tree.node(w).parent;
      if (par == kNoNode) continue;
      if (segment_intersects_sphere(tree.node(w).position, tree.node(par).position, s))
        cut.push_back(w);
    }
  }
  std::sort(cut.begin(), cut.end());
  cut.erase(std::unique(cut.begin(), cut.end()), cut.end());
  for (NodeId w : cut) {
    if (tree.node(w).parent == kNoNode) continue;
    tree.detach(w);
    const std::int32_t idx = partition.allocate(w);
    tree.set_subtree_index(w, idx);
  }

  for (NodeId id : path_nodes)
    if (id != kNoNode &&
        std::binary_search(result.pruned.begin(), result.pruned.end(), id))
      result.pruned_path.push_back(id);
  return result;
}

// --- hot nodes ------------------------------------------------------------

/// Hot nodes inside the LSR: active nodes with at least one eligible
/// neighbor (different subtree, feasible joining edge) within the
/// neighborhood radius. Each entry records the nearest eligible neighbor
/// (ties by smaller id). Utilities are filled by the caller.
template <int N>
std::vector<HotNodeEntry> find_hot_nodes(const Tree<N>& tree, const Sphere<N>& lsr,
                                         const std::vector<Sphere<N>>& cpr,
                                         const StaticWorld<N>& world,
                                         const Params& p) {
  std::vector<HotNodeEntry> entries;
  std::vector<NodeId> in_lsr, nbrs;
  tree.near(lsr.center, lsr.radius, in_lsr);
  for (NodeId n : in_lsr) {
    const auto& rec = tree.node(n);
    tree.near(rec.position, p.neighbor_radius, nbrs);
    NodeId best = kNoNode;
    double best_d = std::numeric_limits<double>::infinity();
    for (NodeId m : nbrs) {
      if (m == n) continue;
      const auto& cand = tree.node(m);
      if (cand.subtree == rec.subtree) continue;
      const double d = distance(rec.position, cand.position);
      if (d >= best_d) continue;
      if (!edge_feasible(world, cpr, rec.position, cand.position)) continue;
      best = m;
      best_d = d;
    }
    if (best != kNoNode) entries.push_back({n, best, 0.0});
  }
  return entries;
}

/// Inverse of the estimated robot -> hot node -> neighbor -> goal length.
/// When the neighbor already belongs to the goal subtree its exact
/// cost-to-go stands in for the goal leg; otherwise the straight-line
/// distance to the goal is used.
template <int N>
double entry_utility(const HotNodeEntry& entry, const RobotState<N>& robot,
                     const Vec<N>& goal, const Tree<N>& tree) {
  const auto& n = tree.node(entry.node);
  const auto& nb = tree.node(entry.best_neighbor);
  double denom = distance(robot.position, n.position) +
                 distance(n.position, nb.position);
  if (nb.subtree == 0 && nb.cost_to_go)
    denom += *nb.cost_to_go;
  else
    denom += distance(nb.position, goal);
  return 1.0 / std::max(denom, 1e-9);
}

/// Highest-utility entry; ties broken by smaller hot-node id.
inline const HotNodeEntry* select_best_entry(std::span<const HotNodeEntry> entries) {
  const HotNodeEntry* best = nullptr;
  for (const auto& e : entries) {
    if (!best || e.utility > best->utility ||
        (e.utility == best->utility && e.node < best->node))
      best = &e;
  }
  return best;
}

enum class ReconnectOutcome { merged_into_goal, merged, stale };

/// Joins the entry's node pair, merging their subtrees. If either side is
/// in the goal subtree it becomes the parent, the absorbed fragment is
/// re-rooted at the junction, adopted into subtree 0 with fresh costs, and
/// the junction is reported as a rewire seed. Otherwise the hot node
/// becomes the parent and the absorbed fragment merely takes its index.
template <int N>
ReconnectOutcome reconnect(Tree<N>& tree, SubtreePartition& partition,
                           const HotNodeEntry& entry, std::vector<NodeId>& seeds) {
  const NodeId a = entry.node;
  const NodeId b = entry.best_neighbor;
  if (!tree.node(a).active() || !tree.node(b).active() ||
      tree.node(a).subtree == tree.node(b).subtree)
    return ReconnectOutcome::stale;

  const bool goal_merge = tree.node(a).subtree == 0 || tree.node(b).subtree == 0;
  NodeId parent, junction;
  if (goal_merge) {
    parent = tree.node(a).subtree == 0 ? a : b;
    junction = tree.node(a).subtree == 0 ? b : a;
  } else {
    parent = a;
    junction = b;
  }
  const std::int32_t absorbed = tree.node(junction).subtree;
  tree.reroot(junction);
  tree.attach(junction, parent);
  if (goal_merge) {
    tree.adopt_into_goal(junction);
    seeds.push_back(junction);
  } else {
    tree.set_subtree_index(junction, tree.node(parent).subtree);
  }
  partition.roots.erase(absorbed);
  return goal_merge ? ReconnectOutcome::merged_into_goal : ReconnectOutcome::merged;
}

// --- repair ---------------------------------------------------------------

struct RepairBudget {
  std::optional<std::chrono::steady_clock::time_point> deadline;
  /// Deterministic ceiling on fallback sampling attempts; exceeded means
  /// the event is reported as failed (the surrounded-robot case).
  int max_fallback_samples = 5000;
};

struct RepairResult {
  bool success = false;
  NodeId entry = kNoNode;
  std::vector<NodeId> seeds;
  int search_passes = 0;
  int reconnections = 0;
  int fallback_samples = 0;
  double last_lsr_radius = 0.0;
};

/// Best goal-subtree node the robot can join directly: within the
/// connection radius, feasible straight segment, minimal entry-plus-path
/// cost (ties by id).
template <int N>
NodeId find_entry_node(const Tree<N>& tree, const Vec<N>& robot_pos,
                       const std::vector<Sphere<N>>& cpr, const StaticWorld<N>& world,
                       double radius, std::vector<NodeId>& scratch) {
  tree.near(robot_pos, radius, scratch);
  NodeId best = kNoNode;
  double best_cost = std::numeric_limits<double>::infinity();
  for (NodeId m : scratch) {
    const auto& rec = tree.node(m);
    if (rec.subtree != 0 || !rec.cost_to_go) continue;
    const double c = distance(robot_pos, rec.position) + *rec.cost_to_go;
    if (c >= best_cost) continue;
    if (!edge_feasible(world, cpr, robot_pos, rec.position)) continue;
    best = m;
    best_cost = c;
  }
  return best;
}

template <int N>
Vec<N> sample_free(const StaticWorld<N>& world, RandomStream& rng) {
  for (int tries = 0; tries < 10000; ++tries) {
    const Vec<N> p = sample_uniform(world.bounds, rng);
    if (world.point_clear(p)) return p;
  }
  throw StateError("sample_free: workspace appears fully blocked");
}

/// Repairs the partition until the goal subtree is reachable from the
/// robot. Informed phase: grow the LSR (anchored at the pruned path node
/// closest to the robot, or the robot itself when only edges were cut) and
/// greedily apply the highest-utility reconnection, refreshing candidates
/// after every merge. Once the LSR has exceeded its maximum, fall back to
/// uniform sampling: each sample joins every reachable nearby subtree and
/// is locally rewired when it lands in the goal subtree.
template <int N>
RepairResult repair_tree(Tree<N>& tree, SubtreePartition& partition,
                         const RobotState<N>& robot, const std::vector<Sphere<N>>& cpr,
                         const StaticWorld<N>& world, const Params& p,
                         RandomStream& rng, const std::vector<NodeId>& pruned_path,
                         const RepairBudget& budget = {}) {
  RepairResult result;

  Vec<N> anchor = robot.position;
  double anchor_d = std::numeric_limits<double>::infinity();
  for (NodeId id : pruned_path) {
    const double d = distance(tree.node(id).position, robot.position);
    if (d < anchor_d) {
      anchor_d = d;
      anchor = tree.node(id).position;
    }
  }

  // The robot's own connection may cross a sphere it is already inside;
  // every tree edge below is checked against the full region.
  const std::vector<Sphere<N>> entry_cpr = avoidable_hazards(cpr, robot.position);

  std::vector<NodeId> scratch;
  double lsr_radius = p.lsr_initial_radius;

  const auto out_of_budget = [&] {
    if (budget.deadline &&
        std::chrono::steady_clock::now() >= *budget.deadline)
      return true;
    return result.fallback_samples > budget.max_fallback_samples;
  };

  while (true) {
    const NodeId entry = find_entry_node(tree, robot.position, entry_cpr, world,
                                         p.neighbor_radius, scratch);
    if (entry != kNoNode) {
      result.success = true;
      result.entry = entry;
      return result;
    }
    if (out_of_budget()) return result;

    if (lsr_radius < p.lsr_max_radius) {
      lsr_radius *= p.lsr_expansion;
      result.last_lsr_radius = lsr_radius;
      ++result.search_passes;
      const Sphere<N> lsr{anchor, lsr_radius};
      auto entries = find_hot_nodes(tree, lsr, cpr, world, p);
      for (auto& e : entries) e.utility = entry_utility(e, robot, tree.node(0).position, tree);
      while (!entries.empty()) {
        const HotNodeEntry* best = select_best_entry(entries);
        const HotNodeEntry chosen = *best;
        const auto outcome = reconnect(tree, partition, chosen, result.seeds);
        if (outcome == ReconnectOutcome::stale) {
          std::erase_if(entries, [&](const HotNodeEntry& e) {
            return e.node == chosen.node && e.best_neighbor == chosen.best_neighbor;
          });
          continue;
        }
        ++result.reconnections;
        const NodeId now = find_entry_node(tree, robot.position, entry_cpr, world,
                                           p.neighbor_radius, scratch);
        if (now != kNoNode) {
          result.success = true;
          result.entry = now;
          return result;
        }
        if (out_of_budget()) return result;
        entries = find_hot_nodes(tree, lsr, cpr, world, p);
        for (auto& e : entries) e.utility = entry_utility(e, robot, tree.node(0).position, tree);
      }
    } else {
      ++result.fallback_samples;
      const Vec<N> x = sample_free(world, rng);
      tree.near(x, p.neighbor_radius, scratch);
      std::vector<NodeId> feasible;
      for (NodeId m : scratch)
        if (edge_feasible(world, cpr, x, tree.node(m).position)) feasible.push_back(m);
      if (feasible.empty()) continue;

      // Parent preference: cheapest goal-subtree candidate, else nearest.
      NodeId parent = kNoNode;
      double best_key = std::numeric_limits<double>::infinity();
      for (NodeId m : feasible) {
        const auto& rec = tree.node(m);
        if (rec.subtree != 0 || !rec.cost_to_go) continue;
        const double c = *rec.cost_to_go + distance(rec.position, x);
        if (c < best_key) {
          best_key = c;
          parent = m;
        }
      }
      if (parent == kNoNode) {
        for (NodeId m : feasible) {
          const double d = distance(tree.node(m).position, x);
          if (d < best_key) {
            best_key = d;
            parent = m;
          }
        }
      }
      const NodeId fresh = tree.insert(x, parent);

      // Bridge every other reachable subtree through the new node, nearest
      // member first.
      while (true) {
        NodeId junction = kNoNode;
        double jd = std::numeric_limits<double>::infinity();
        for (NodeId m : feasible) {
          const auto& rec = tree.node(m);
          if (rec.subtree == tree.node(fresh).subtree) continue;
          const double d = distance(rec.position, x);
          if (d < jd) {
            jd = d;
            junction = m;
          }
        }
        if (junction == kNoNode) break;
        const std::int32_t absorbed = tree.node(junction).subtree;
        tree.reroot(junction);
        tree.attach(junction, fresh);
        if (tree.node(fresh).subtree == 0) {
          tree.adopt_into_goal(junction);
          result.seeds.push_back(junction);
        } else {
          tree.set_subtree_index(junction, tree.node(fresh).subtree);
        }
        partition.roots.erase(absorbed);
      }

      if (tree.node(fresh).subtree == 0)
        tree.rewire_neighbors(fresh, p.neighbor_radius, world, cpr);
    }
  }
}

// --- path extraction and restoration --------------------------------------

/// Path from the robot through `entry` up the parent chain to the goal.
template <int N>
Path<N> path_search(const Tree<N>& tree, const RobotState<N>& robot, NodeId entry) {
  const auto& rec = tree.node(entry);
  if (!rec.active() || rec.subtree != 0 || !rec.cost_to_go)
    throw StateError("path_search: entry node is not part of the goal subtree");
  Path<N> path;
  path.waypoints.push_back(robot.position);
  path.node_ids.push_back(kNoNode);
  for (NodeId x = entry; x != kNoNode; x = tree.node(x).parent) {
    path.waypoints.push_back(tree.node(x).position);
    path.node_ids.push_back(x);
  }
  return path;
}

struct RestoreReport {
  std::vector<NodeId> unrestored;        // pruned nodes left pruned
  std::vector<NodeId> unattached_roots;  // subtree roots left disjoint
  bool clean() const { return unrestored.empty() && unattached_roots.empty(); }
};

/// Rebuilds a single tree after a replanning event. Pruned nodes reactivate
/// onto their recorded parents when the edge is statically clear, otherwise
/// onto the nearest active node reachable with a clear edge (expanding the
/// search radius on failure). Leftover subtree roots then attach to their
/// nearest goal-subtree node. Restoration edges are checked against static
/// obstacles only; the next validate/prune cycle re-handles the moving
/// ones. Finally every index and cost is recomputed from the goal root.
template <int N>
RestoreReport restore_tree(Tree<N>& tree, SubtreePartition& partition,
                           const StaticWorld<N>& world, const Params& p) {
  RestoreReport report;

  struct Candidate {
    NodeId id;
    double parent_distance;
  };
  std::vector<Candidate> pruned;
  for (std::size_t i = 0; i < tree.size(); ++i) {
    const auto& rec = tree.node(static_cast<NodeId>(i));
    if (rec.active()) continue;
    double d = std::numeric_limits<double>::infinity();
    if (rec.restore_parent != kNoNode)
      d = distance(rec.position, tree.node(rec.restore_parent).position);
    pruned.push_back({static_cast<NodeId>(i), d});
  }
  std::sort(pruned.begin(), pruned.end(), [](const Candidate& a, const Candidate& b) {
    if (a.parent_distance != b.parent_distance)
      return a.parent_distance < b.parent_distance;
    return a.id < b.id;
  });

  std::vector<NodeId> scratch;
  const double give_up = 2.0 * world.bounds.diameter();
  for (const auto& cand : pruned) {
    const auto& rec = tree.node(cand.id);
    const NodeId rp = rec.restore_parent;
    if (rp != kNoNode && tree.node(rp).active() &&
        world.segment_clear(rec.position, tree.node(rp).position)) {
      tree.reactivate(cand.id, rp);
      continue;
    }
    NodeId found = kNoNode;
    for (double radius = p.neighbor_radius; radius <= give_up; radius *= 2.0) {
      tree.near(rec.position, radius, scratch);
      double best_d = std::numeric_limits<double>::infinity();
      for (NodeId m : scratch) {
        const double d = distance(tree.node(m).position, rec.position);
        if (d < best_d && world.segment_clear(rec.position, tree.node(m).position)) {
          best_d = d;
          found = m;
        }
      }
      if (found != kNoNode) break;
    }
    if (found != kNoNode)
      tree.reactivate(cand.id, found);
    else
      report.unrestored.push_back(cand.id);
  }

  // Remaining disjoint roots attach to the nearest goal-subtree node.
  std::vector<std::pair<std::int32_t, NodeId>> leftovers(partition.roots.begin(),
                                                         partition.roots.end());
  for (const auto& [idx, root] : leftovers) {
    if (idx == 0) continue;
    const Vec<N>& pos = tree.node(root).position;
    NodeId found = kNoNode;
    for (double radius = p.neighbor_radius; radius <= give_up; radius *= 2.0) {
      tree.near(pos, radius, scratch);
      double best_d = std::numeric_limits<double>::infinity();
      for (NodeId m : scratch) {
        const auto& rec = tree.node(m);
        if (rec.subtree != 0) continue;
        const double d = distance(rec.position, pos);
        if (d < best_d && world.segment_clear(pos, rec.position)) {
          best_d = d;
          found = m;
        }
      }
      if (found != kNoNode) break;
    }
    if (found != kNoNode) {
      tree.attach(root, found);
      tree.set_subtree_index(root, 0);
      partition.roots.erase(idx);
    } else {
      report.unattached_roots.push_back(root);
    }
  }

  tree.recompute_from_root();
  return report;
}

}  // namespace replan
