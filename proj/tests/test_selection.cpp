#include <doctest.h>

#include "fixtures.hpp"

using namespace meshplan;
using fixtures::idx;
using fixtures::link_between;

TEST_CASE("diamond link weights follow the lowest-index shortest path") {
  const auto t = fixtures::diamond();
  const auto w = weight_links(*t);
  CHECK(w.weight[link_between(*t, "g", "a")] == 2.0);
  CHECK(w.weight[link_between(*t, "g", "b")] == 1.0);
  CHECK(w.weight[link_between(*t, "a", "c")] == 1.0);
  CHECK(w.weight[link_between(*t, "b", "c")] == 0.0);
  CHECK(w.disconnected.empty());
}

TEST_CASE("weights: single leaf, zero demand, masked links") {
  const auto t = fixtures::build({fixtures::make_node("g", 0, 0, Layer::Gateway),
                                  fixtures::make_node("x", 10, 0)},
                                 {{"g", "x"}});
  CHECK(weight_links(*t).weight == std::vector<double>{1.0});

  const auto d = fixtures::diamond();
  const Demands zero(d->node_count(), 0.0);
  for (double v : weight_links(*d, &zero).weight) CHECK(v == 0.0);

  std::vector<bool> allowed(d->link_count(), true);
  allowed[link_between(*d, "g", "a")] = false;
  const auto w = weight_links(*d, nullptr, allowed);
  CHECK(w.weight[link_between(*d, "g", "a")] == 0.0);
  CHECK(w.weight[link_between(*d, "g", "b")] == 3.0);
  CHECK(w.weight[link_between(*d, "b", "c")] == 2.0);
  CHECK(w.weight[link_between(*d, "a", "c")] == 1.0);
}

TEST_CASE("k=1 free-form on the diamond keeps all four links") {
  const auto t = fixtures::diamond();
  const auto a = select_active_links(t, weight_links(*t), {1, false, 0});
  CHECK(a.size() == 4);
  CHECK(a.unconnected.empty());
  CHECK(a.k_used == 1);
  CHECK_FALSE(a.colors.has_value());
}

TEST_CASE("k=1 with both c-links in one sector of c drops the lighter one") {
  const auto t = fixtures::diamond(1);
  const auto a = select_active_links(t, weight_links(*t), {1, false, 0});
  CHECK(a.size() == 3);
  CHECK(a.is_active(link_between(*t, "a", "c")));
  CHECK_FALSE(a.is_active(link_between(*t, "b", "c")));
}

TEST_CASE("bipartite diamond coloring") {
  const auto t = fixtures::diamond();
  const auto a = select_active_links(t, weight_links(*t), {2, true, 0});
  REQUIRE(a.colors.has_value());
  CHECK((*a.colors)[idx(*t, "g")] == 0);
  CHECK((*a.colors)[idx(*t, "a")] == 1);
  CHECK((*a.colors)[idx(*t, "b")] == 1);
  CHECK((*a.colors)[idx(*t, "c")] == 0);
  CHECK(a.size() == 4);
  CHECK(fixtures::coloring_proper(a));
}

TEST_CASE("bipartite mode rejects the odd-cycle closing link") {
  // g-a-b triangle: g-a and g-b give a, b the same color.
  const auto t = fixtures::build({fixtures::make_node("g", 0, 0, Layer::Gateway),
                                  fixtures::make_node("a", 100, 50), fixtures::make_node("b", 100, -50)},
                                 {{"g", "a"}, {"g", "b"}, {"a", "b"}});
  const auto free = select_active_links(t, weight_links(*t), {2, false, 0});
  const auto bip = select_active_links(t, weight_links(*t), {2, true, 0});
  CHECK(free.size() == 3);
  CHECK(bip.size() == 2);
  CHECK_FALSE(bip.is_active(link_between(*t, "a", "b")));
}

TEST_CASE("avoided link never appears") {
  const auto t = fixtures::diamond();
  const AvoidList avoid{make_key(NodeId{"g"}, NodeId{"a"})};
  const auto a = select_active_links(t, weight_links(*t), {2, false, 0}, avoid);
  CHECK_FALSE(a.is_active(link_between(*t, "g", "a")));
  CHECK(a.unconnected.empty());  // a hangs off c
  CHECK(a.avoid == avoid);
  CHECK(make_key(NodeId{"g"}, NodeId{"a"}) == make_key(NodeId{"a"}, NodeId{"g"}));
}

TEST_CASE("escalation raises k to reach stranded nodes") {
  // Three leaves in one gateway sector: k=1 strands two of them.
  const auto t = fixtures::build(
      {fixtures::make_node("g", 0, 0, Layer::Gateway, 1), fixtures::make_node("x", 10, 1),
       fixtures::make_node("y", 10, 5), fixtures::make_node("z", 10, 9)},
      {{"g", "x"}, {"g", "y"}, {"g", "z"}});
  const auto w = weight_links(*t);
  const auto stuck = select_active_links(t, w, {1, false, 0});
  CHECK(stuck.unconnected.size() == 2);
  CHECK(stuck.unconnected == fixtures::bfs_unreachable(stuck));
  const auto grown = select_active_links(t, w, {1, false, 2});
  CHECK(grown.unconnected.empty());
  CHECK(grown.k_used == 3);
  const auto partial = select_active_links(t, w, {1, false, 1});
  CHECK(partial.k_used == 2);
  CHECK(partial.unconnected.size() == 1);
}

TEST_CASE("topology without a gateway is an error") {
  const auto t = fixtures::build({fixtures::make_node("a", 0, 0), fixtures::make_node("b", 5, 0)},
                                 {{"a", "b"}});
  CHECK_THROWS_AS(select_active_links(t, weight_links(*t), {}), Error);
}

TEST_CASE("fan-out delay bound") {
  CHECK(fanout_delay_bound(2, 64) == doctest::Approx(12.0));
  CHECK(fanout_delay_bound(4, 64) == doctest::Approx(12.0));
  CHECK(fanout_delay_bound(3, 27) == doctest::Approx(9.0));
  CHECK_THROWS_AS(fanout_delay_bound(1, 64), Error);
  CHECK_THROWS_AS(fanout_delay_bound(2, 1), Error);
}

TEST_CASE("selection properties on random instances") {
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    const auto t = fixtures::random_topology(seed, 6 + static_cast<int>(seed % 7), 1 + seed % 2, 0.45);
    const auto w = weight_links(*t);
    for (bool bip : {false, true}) {
      for (int k : {1, 2, 3}) {
        const AvoidList avoid = t->link_count() > 0 && seed % 3 == 0
                                    ? AvoidList{key_of(t->link(0))}
                                    : AvoidList{};
        const auto a = select_active_links(t, w, {k, bip, 1}, avoid);
        std::map<std::pair<NodeIndex, int>, int> load;
        for (LinkIndex l : a.active_links) {
          ++load[{t->end_a(l), t->sector_at(l, t->end_a(l))}];
          ++load[{t->end_b(l), t->sector_at(l, t->end_b(l))}];
          CHECK_FALSE(avoid.contains(key_of(t->link(l))));
        }
        for (const auto& [_, n] : load) CHECK(n <= a.k_used);
        CHECK(a.unconnected == fixtures::bfs_unreachable(a));
        if (bip) {
          CHECK(fixtures::two_colorable(a));
          CHECK(fixtures::coloring_proper(a));
        }
      }
    }
  }
}
