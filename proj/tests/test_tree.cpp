#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "replan/tree.hpp"
#include "oracles.hpp"

using namespace replan;

namespace {

Vec2 v2(double x, double y) { return Vec2{{x, y}}; }

Bounds<2> box32() { return {v2(0, 0), v2(32, 32)}; }

StaticWorld<2> open_world() { return {box32(), {}}; }

/// Random tree fixture: nodes inserted under their current nearest node, so
/// structure stays a valid forest without any planner logic.
Tree<2> random_tree(int n, RandomStream& rng) {
  Tree<2> tree(box32(), 1.7);
  tree.add_root(v2(rng.uniform(0, 32), rng.uniform(0, 32)));
  for (int i = 1; i < n; ++i) {
    const Vec2 p = v2(rng.uniform(0, 32), rng.uniform(0, 32));
    tree.insert(p, tree.nearest(p));
  }
  return tree;
}

}  // namespace

TEST_CASE("obstacle-free build inserts every sample") {
  RandomStream rng(42);
  const auto world = open_world();
  Tree<2> tree = build_initial_tree(world, v2(30, 30), 2500, 1.0, 1.7, rng);
  CHECK(tree.size() == 2501);
  CHECK(tree.active_count() == 2501);

  const auto& root = tree.node(tree.goal_root());
  CHECK(root.parent == kNoNode);
  CHECK(root.cost_to_go == 0.0);

  for (std::size_t i = 0; i < tree.size(); ++i) {
    const auto& rec = tree.node(static_cast<NodeId>(i));
    CHECK(rec.subtree == 0);
    CHECK(rec.active());
    REQUIRE(rec.cost_to_go.has_value());
  }

  // Exact cost structure against the single-source shortest path oracle
  // over the tree's own edge set.
  const auto dist = oracle::shortest_path_costs(tree);
  for (std::size_t i = 0; i < tree.size(); ++i)
    CHECK(std::abs(dist[i] - *tree.node(static_cast<NodeId>(i)).cost_to_go) <= 1e-9);

  CHECK(oracle::parent_child_consistent(tree));
  CHECK(oracle::acyclic(tree));
}

TEST_CASE("build with static obstacles keeps nodes and edges clear") {
  RandomStream rng(43);
  StaticWorld<2> world{box32(), {{v2(16, 16), 3.0}, {v2(8, 24), 2.0}}};
  Tree<2> tree = build_initial_tree(world, v2(30, 30), 1500, 1.0, 1.7, rng);
  CHECK(tree.size() > 500);
  for (std::size_t i = 0; i < tree.size(); ++i) {
    const auto& rec = tree.node(static_cast<NodeId>(i));
    CHECK(world.point_clear(rec.position));
    if (rec.parent != kNoNode)
      CHECK(world.segment_clear(rec.position, tree.node(rec.parent).position));
  }
}

TEST_CASE("build rejects a goal inside a static obstacle") {
  RandomStream rng(44);
  StaticWorld<2> world{box32(), {{v2(30, 30), 1.0}}};
  CHECK_THROWS_AS(build_initial_tree(world, v2(30, 30), 10, 1.0, 1.7, rng), ConfigError);
}

TEST_CASE("nearest matches a linear scan") {
  Tree<2> single(box32(), 1.7);
  single.add_root(v2(4, 4));
  CHECK(single.nearest(v2(30, 2)) == 0);
  CHECK(single.nearest(v2(4, 4)) == 0);

  RandomStream rng(45);
  Tree<2> tree = random_tree(300, rng);
  for (int i = 0; i < 300; ++i) {
    const Vec2 p = v2(rng.uniform(-2, 34), rng.uniform(-2, 34));
    CHECK(tree.nearest(p) == oracle::nearest_scan(tree, p));
  }
}

TEST_CASE("near returns exactly the closed-radius active set") {
  RandomStream rng(46);
  Tree<2> tree = random_tree(250, rng);

  // Radius below every pairwise gap from a far corner point.
  CHECK(tree.near(v2(-10, -10), 1e-6).empty());

  // Closed-ball boundary: node at exactly the query radius is included.
  Tree<2> boundary(box32(), 1.0);
  boundary.add_root(v2(0, 0));
  boundary.insert(v2(3, 4), 0);
  const auto hits = boundary.near(v2(0, 0), 5.0);
  CHECK(hits == std::vector<NodeId>{0, 1});
  CHECK(boundary.near(v2(0, 0), 0.0) == std::vector<NodeId>{0});

  for (int i = 0; i < 200; ++i) {
    const Vec2 p = v2(rng.uniform(0, 32), rng.uniform(0, 32));
    const double r = rng.uniform(0.1, 8.0);
    CHECK(tree.near(p, r) == oracle::near_scan(tree, p, r));
  }
}

TEST_CASE("index stays consistent through prune and reactivate cycles") {
  RandomStream rng(47);
  Tree<2> tree = random_tree(200, rng);
  std::vector<NodeId> pruned;
  for (int round = 0; round < 400; ++round) {
    const double what = rng.uniform01();
    if (what < 0.4) {
      const Vec2 p = v2(rng.uniform(0, 32), rng.uniform(0, 32));
      tree.insert(p, tree.nearest(p));
    } else if (what < 0.7) {
      const auto id = static_cast<NodeId>(rng.uniform_index(tree.size()));
      if (id == tree.goal_root() || !tree.node(id).active()) continue;
      const auto children = tree.node(id).children;
      const NodeId parent = tree.node(id).parent;
      for (NodeId c : children) tree.detach(c);
      for (NodeId c : children)
        if (tree.node(c).active()) tree.set_subtree_index(c, 1);
      tree.prune_node(id, parent);
      pruned.push_back(id);
    } else if (!pruned.empty()) {
      const auto pick = rng.uniform_index(pruned.size());
      const NodeId id = pruned[pick];
      pruned.erase(pruned.begin() + static_cast<std::ptrdiff_t>(pick));
      tree.reactivate(id, tree.nearest(tree.node(id).position));
    }
    if (round % 20 == 0) {
      const Vec2 p = v2(rng.uniform(0, 32), rng.uniform(0, 32));
      const double r = rng.uniform(0.5, 6.0);
      CHECK(tree.near(p, r) == oracle::near_scan(tree, p, r));
      CHECK(tree.nearest(p) == oracle::nearest_scan(tree, p));
    }
  }
  CHECK(oracle::parent_child_consistent(tree));
  CHECK(oracle::acyclic(tree));
}

TEST_CASE("rewire cascade reparents through a cheaper neighbor") {
  // goal G at origin; A under G at distance 1; B under A with total cost 2.
  // With radius 1.7 the cascade moves B directly under G at cost sqrt(2).
  Tree<2> tree(box32(), 1.7);
  const NodeId g = tree.add_root(v2(0, 0));
  const NodeId a = tree.insert(v2(1, 0), g);
  const NodeId b = tree.insert(v2(1, 1), a);
  CHECK(*tree.node(b).cost_to_go == doctest::Approx(2.0).epsilon(1e-12));

  const auto world = open_world();
  const std::vector<NodeId> seeds{g};
  tree.rewire_cascade(seeds, 1.7, world, {});

  CHECK(tree.node(b).parent == g);
  CHECK(*tree.node(b).cost_to_go == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(*tree.node(a).cost_to_go == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(oracle::parent_child_consistent(tree));
  CHECK(oracle::costs_consistent(tree));

  // Already-optimal neighborhood: a second cascade is a fixed point.
  const auto parent_before = tree.node(b).parent;
  const auto cost_before = *tree.node(b).cost_to_go;
  tree.rewire_cascade(seeds, 1.7, world, {});
  CHECK(tree.node(b).parent == parent_before);
  CHECK(*tree.node(b).cost_to_go == cost_before);
}

TEST_CASE("rewire cascade never raises a cost and never creates a cycle") {
  RandomStream rng(48);
  const auto world = open_world();
  for (int trial = 0; trial < 20; ++trial) {
    Tree<2> tree = random_tree(150, rng);
    std::vector<double> before(tree.size());
    for (std::size_t i = 0; i < tree.size(); ++i)
      before[i] = *tree.node(static_cast<NodeId>(i)).cost_to_go;

    std::vector<NodeId> seeds;
    for (int k = 0; k < 5; ++k)
      seeds.push_back(static_cast<NodeId>(rng.uniform_index(tree.size())));
    tree.rewire_cascade(seeds, 2.5, world, {});

    for (std::size_t i = 0; i < tree.size(); ++i)
      CHECK(*tree.node(static_cast<NodeId>(i)).cost_to_go <= before[i] + 1e-12);
    CHECK(oracle::acyclic(tree));
    CHECK(oracle::parent_child_consistent(tree));
    CHECK(oracle::costs_consistent(tree));
  }
}

TEST_CASE("cascade respects forbidden spheres") {
  Tree<2> tree(box32(), 1.7);
  const NodeId g = tree.add_root(v2(0, 0));
  const NodeId a = tree.insert(v2(1, 0), g);
  const NodeId b = tree.insert(v2(1, 1), a);
  const auto world = open_world();
  // A sphere sitting on the would-be shortcut edge G-B blocks the rewire.
  const std::vector<Sphere<2>> forbidden{{v2(0.5, 0.5), 0.2}};
  tree.rewire_cascade(std::vector<NodeId>{g}, 1.7, world, forbidden);
  CHECK(tree.node(b).parent == a);
  CHECK(*tree.node(b).cost_to_go == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("set_subtree_index covers exactly the active descendants") {
  Tree<2> tree(box32(), 1.7);
  const NodeId g = tree.add_root(v2(0, 0));
  const NodeId a = tree.insert(v2(1, 0), g);
  const NodeId b = tree.insert(v2(2, 0), a);
  const NodeId c = tree.insert(v2(3, 0), b);

  tree.set_subtree_index(c, 5);  // leaf only
  CHECK(tree.node(c).subtree == 5);
  CHECK(tree.node(b).subtree == 0);

  tree.set_subtree_index(a, 7);  // chain of three
  CHECK(tree.node(a).subtree == 7);
  CHECK(tree.node(b).subtree == 7);
  CHECK(tree.node(c).subtree == 7);
  CHECK(tree.node(g).subtree == 0);
  CHECK_FALSE(tree.node(b).cost_to_go.has_value());  // nonzero index drops cost

  RandomStream rng(49);
  Tree<2> big = random_tree(100, rng);
  const auto root = static_cast<NodeId>(rng.uniform_index(big.size()));
  const auto expected = oracle::reachable_set(big, root);
  big.set_subtree_index(root, 3);
  std::vector<NodeId> got;
  for (std::size_t i = 0; i < big.size(); ++i)
    if (big.node(static_cast<NodeId>(i)).subtree == 3)
      got.push_back(static_cast<NodeId>(i));
  CHECK(got == expected);
}

TEST_CASE("reroot reverses the parent chain only") {
  Tree<2> tree(box32(), 1.7);
  const NodeId g = tree.add_root(v2(0, 0));
  const NodeId a = tree.insert(v2(1, 0), g);
  const NodeId b = tree.insert(v2(2, 0), a);
  const NodeId side = tree.insert(v2(1, 1), a);
  tree.detach(a);  // fragment rooted at a: {a, b, side}
  tree.reroot(b);
  CHECK(tree.node(b).parent == kNoNode);
  CHECK(tree.node(a).parent == b);
  CHECK(tree.node(side).parent == a);
  CHECK(tree.node(g).parent == kNoNode);
  CHECK(oracle::parent_child_consistent(tree));
  CHECK(oracle::acyclic(tree));
}

TEST_CASE("snapshot export is line-delimited and parseable") {
  Tree<2> tree(box32(), 1.7);
  tree.add_root(v2(30, 30));
  const NodeId a = tree.insert(v2(29, 30), 0);
  tree.prune_node(a, 0);
  std::ostringstream os;
  tree.write_snapshot(os);
  std::istringstream in(os.str());
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) {
    ++lines;
    std::istringstream ls(line);
    int id;
    double x, y;
    int parent, subtree;
    std::string cost, status;
    ls >> id >> x >> y >> parent >> subtree >> cost >> status;
    CHECK(static_cast<bool>(ls));
    CHECK((status == "active" || status == "pruned"));
  }
  CHECK(lines == 2);
}
