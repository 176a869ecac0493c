#include <doctest.h>

#include "fixtures.hpp"

using namespace meshplan;
using fixtures::idx;

namespace {

std::vector<NodeIndex> routed_nodes(const Topology& t, const RoutingConfig& r) {
  std::vector<NodeIndex> out;
  for (NodeIndex v = 0; v < t.node_count(); ++v) {
    if (std::find(r.excluded.begin(), r.excluded.end(), v) == r.excluded.end()) out.push_back(v);
  }
  return out;
}

// Nodes in the active component of `root`.
std::vector<NodeIndex> component(const ActiveTopology& a, NodeIndex root) {
  const Topology& t = a.topology();
  std::vector<bool> seen(t.node_count(), false);
  std::vector<NodeIndex> queue{root};
  seen[root] = true;
  for (std::size_t h = 0; h < queue.size(); ++h) {
    for (LinkIndex l : t.incident(queue[h])) {
      if (!a.is_active(l)) continue;
      const NodeIndex v = t.other_end(l, queue[h]);
      if (!seen[v]) seen[v] = true, queue.push_back(v);
    }
  }
  std::sort(queue.begin(), queue.end());
  return queue;
}

}  // namespace

TEST_CASE("diamond: one tree through a, one through b") {
  const auto t = fixtures::diamond();
  const auto active = select_active_links(t, weight_links(*t), {2, false, 0});
  REQUIRE(active.size() == 4);
  const auto r = compute_mdst(active);
  REQUIRE(r.trees.size() == 2);
  const NodeIndex g = idx(*t, "g"), a = idx(*t, "a"), b = idx(*t, "b"), c = idx(*t, "c");
  CHECK(r.trees[0].parent[a] == g);
  CHECK(r.trees[0].parent[c] == a);
  CHECK(r.trees[0].parent[b] == c);
  CHECK(r.trees[1].parent[b] == g);
  CHECK(r.trees[1].parent[c] == b);
  CHECK(r.trees[1].parent[a] == c);
  CHECK(r.stem_of[a] == 0);
  CHECK(r.stem_of[c] == 0);
  CHECK(r.stem_of[b] == 1);
  REQUIRE(r.primary[c].has_value());
  CHECK(r.primary[c]->hops() == 2);
  CHECK(r.primary[c]->nodes == std::vector<NodeIndex>{c, a, g});
  CHECK(r.primary[a]->tree == 0);
  CHECK(r.primary[b]->tree == 1);
  CHECK_FALSE(r.primary[g].has_value());
  CHECK(count_disjoint_paths(r, c) == 2);
  CHECK(count_disjoint_paths(r, a) == 2);  // a-g and a-c-b-g
  for (const auto& tree : r.trees) CHECK(fixtures::tree_ok(active, tree, routed_nodes(*t, r)));
}

TEST_CASE("star: one stem per leaf") {
  const auto t = fixtures::build({fixtures::make_node("g", 0, 0, Layer::Gateway),
                                  fixtures::make_node("x", 10, 1), fixtures::make_node("y", -10, 1),
                                  fixtures::make_node("z", 0, -10)},
                                 {{"g", "x"}, {"g", "y"}, {"g", "z"}});
  const auto active = select_active_links(t, weight_links(*t), {3, false, 0});
  const auto r = compute_mdst(active);
  CHECK(r.trees.size() == 3);
  for (const char* leaf : {"x", "y", "z"}) {
    const NodeIndex v = idx(*t, leaf);
    CHECK(r.primary[v]->hops() == 1);
    CHECK(count_disjoint_paths(r, v) == 1);
  }
  // Trees span only what they can reach: a leaf in another stem is not
  // reachable without a gateway transit.
  for (const auto& tree : r.trees) CHECK(tree.contains(tree.root));
}

TEST_CASE("chain: one tree, hop counts 1 and 2") {
  const auto t = fixtures::build({fixtures::make_node("g", 0, 0, Layer::Gateway),
                                  fixtures::make_node("a", 10, 0), fixtures::make_node("b", 20, 0)},
                                 {{"g", "a"}, {"a", "b"}});
  const auto active = select_active_links(t, weight_links(*t), {2, false, 0});
  const auto r = compute_mdst(active);
  REQUIRE(r.trees.size() == 1);
  CHECK(r.primary[idx(*t, "a")]->hops() == 1);
  CHECK(r.primary[idx(*t, "b")]->hops() == 2);
  CHECK(count_disjoint_paths(r, idx(*t, "b")) == 1);
  CHECK(tree_path(r.trees[0], idx(*t, "b")) ==
        std::vector<NodeIndex>{idx(*t, "b"), idx(*t, "a"), idx(*t, "g")});
  CHECK_THROWS_AS(count_disjoint_paths(r, idx(*t, "g")), Error);
  CHECK_THROWS_AS(count_disjoint_paths(r, 99), Error);
}

TEST_CASE("max_trees keeps the heaviest stems") {
  const auto t = fixtures::diamond();
  const auto active = select_active_links(t, weight_links(*t), {2, false, 0});
  const auto r = compute_mdst(active, nullptr, RoutingOptions{1});
  REQUIRE(r.trees.size() == 1);
  CHECK(r.trees[0].parent[idx(*t, "a")] == idx(*t, "g"));
  for (NodeIndex v : {idx(*t, "a"), idx(*t, "b"), idx(*t, "c")}) CHECK(r.stem_of[v] == 0);
}

TEST_CASE("no gateway-incident link is an error") {
  const auto t = fixtures::build({fixtures::make_node("g", 0, 0, Layer::Gateway),
                                  fixtures::make_node("a", 10, 0), fixtures::make_node("b", 20, 0)},
                                 {{"a", "b"}});
  const auto active = fixtures::all_active(t);
  CHECK_THROWS_AS(compute_mdst(active), Error);
}

TEST_CASE("disjoint counts on explicit trees") {
  // Square g-a-c-b-g plus chord a-b, trees given by hand.
  const auto t = fixtures::build({fixtures::make_node("g", 0, 0, Layer::Gateway),
                                  fixtures::make_node("a", 100, 50), fixtures::make_node("b", 100, -50),
                                  fixtures::make_node("c", 200, 0)},
                                 {{"g", "a"}, {"g", "b"}, {"a", "c"}, {"b", "c"}, {"a", "b"}});
  const NodeIndex g = idx(*t, "g"), a = idx(*t, "a"), b = idx(*t, "b"), c = idx(*t, "c");
  auto tree = [&](int id, std::vector<std::pair<NodeIndex, NodeIndex>> edges) {
    SpanningTree s;
    s.id = id;
    s.root = g;
    s.parent.assign(t->node_count(), kNoNode);
    s.parent_link.assign(t->node_count(), 0);
    for (auto [child, par] : edges) {
      s.parent[child] = par;
      s.parent_link[child] = *t->find_link(child, par);
    }
    return s;
  };
  RoutingConfig r;
  r.primary.resize(t->node_count());
  r.primary[a] = PrimaryPath{0, {a, g}};
  r.primary[b] = PrimaryPath{1, {b, g}};
  r.primary[c] = PrimaryPath{0, {c, a, g}};
  r.stem_of.assign(t->node_count(), 0);
  r.trees = {tree(0, {{a, g}, {c, a}, {b, a}}), tree(1, {{b, g}, {a, b}, {c, b}}),
             tree(2, {{a, g}, {b, a}, {c, b}})};
  // c: c-a-g, c-b-g, c-b-a-g; only the first two are interior-disjoint.
  CHECK(count_disjoint_paths(r, c) == 2);
  // b: b-a-g, b-g (no interior), b-a-g again.
  CHECK(count_disjoint_paths(r, b) == 2);
  // a: a-g, a-b-g.
  CHECK(count_disjoint_paths(r, a) == 2);
  const auto rep = disjointness(r);
  CHECK(rep.count[g] == 0);
  CHECK(rep.below_two.empty());
  CHECK(rep.mean == doctest::Approx(2.0));
}

TEST_CASE("routing properties on random instances") {
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const auto t = fixtures::random_topology(seed, 5 + static_cast<int>(seed % 8), 1 + seed % 3, 0.5);
    const auto active = select_active_links(t, weight_links(*t), {2, seed % 2 == 1, 1});
    bool has_gw_link = false;
    for (LinkIndex l : active.active_links) {
      has_gw_link |= t->is_gateway(t->end_a(l)) != t->is_gateway(t->end_b(l));
    }
    if (!has_gw_link) continue;
    const auto r = compute_mdst(active);
    ++checked;
    const auto members = routed_nodes(*t, r);
    CHECK(r.excluded == active.unconnected);
    for (const auto& tree : r.trees) {
      CHECK(fixtures::tree_ok(active, tree, component(active, tree.root)));
    }
    // Stems partition the routed non-gateway nodes.
    for (NodeIndex v : members) {
      if (t->is_gateway(v)) {
        CHECK(r.stem_of[v] == -1);
        continue;
      }
      CHECK(r.stem_of[v] >= 0);
      REQUIRE(r.primary[v].has_value());
      for (const auto& tree : r.trees) {
        const auto path = tree_path(tree, v);
        if (!path.empty()) CHECK(r.primary[v]->hops() <= path.size() - 1);
      }
      std::vector<std::vector<NodeIndex>> paths;
      for (const auto& tree : r.trees) paths.push_back(tree_path(tree, v));
      CHECK(count_disjoint_paths(r, v) == fixtures::brute_disjoint(paths));
    }
  }
  CHECK(checked > 100);
}
