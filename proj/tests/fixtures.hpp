#pragma once

// Small hand-built topologies and independent reference checks shared by the
// unit tests and the acceptance runner. The checks deliberately avoid the
// library's own helpers (other than the data types).

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "meshplan/netmodel.hpp"
#include "meshplan/random.hpp"
#include "meshplan/routing.hpp"
#include "meshplan/scheduler.hpp"
#include "meshplan/selection.hpp"
#include "meshplan/tsgen.hpp"

namespace fixtures {

using namespace meshplan;

inline Node make_node(const std::string& id, double x, double y, Layer layer = Layer::Street,
                      int sectors = 4, double z = 0.0) {
  Node n;
  n.id = NodeId{id};
  n.position = {x, y, z};
  n.layer = layer;
  n.sector_count = sectors;
  return n;
}

inline std::shared_ptr<const Topology> build(
    const std::vector<Node>& nodes, const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::map<std::string, Node> by_id;
  for (const auto& n : nodes) by_id[n.id.value] = n;
  std::vector<Link> links;
  for (const auto& [u, v] : pairs) links.push_back(make_link(by_id.at(u), by_id.at(v)));
  return std::make_shared<const Topology>(nodes, links);
}

// g at the origin, a above-right, b below-right, c further right. Every link
// lands in its own sector at both ends (4 sectors, offset 0).
inline std::vector<Node> diamond_nodes(int c_sectors = 4) {
  return {make_node("g", 0, 0, Layer::Gateway), make_node("a", 100, 50),
          make_node("b", 100, -50), make_node("c", 200, 0, Layer::Street, c_sectors)};
}

inline std::shared_ptr<const Topology> diamond(int c_sectors = 4) {
  return build(diamond_nodes(c_sectors), {{"g", "a"}, {"g", "b"}, {"a", "c"}, {"b", "c"}});
}

inline NodeIndex idx(const Topology& t, const std::string& id) { return t.index_of(NodeId{id}); }

inline LinkIndex link_between(const Topology& t, const std::string& u, const std::string& v) {
  return *t.find_link(idx(t, u), idx(t, v));
}

inline DirectedLink dl(const Topology& t, const std::string& tx, const std::string& rx) {
  return t.directed(link_between(t, tx, rx), idx(t, tx));
}

/// Every candidate link active.
inline ActiveTopology all_active(std::shared_ptr<const Topology> t) {
  ActiveTopology a;
  a.base = std::move(t);
  a.active_links.resize(a.base->link_count());
  std::iota(a.active_links.begin(), a.active_links.end(), LinkIndex{0});
  a.k_used = 0;
  finalize_active(a);
  return a;
}

/// Random instance: n nodes scattered in a square, `gateways` of them
/// Gateway layer, each pair linked with probability p. Random sector counts
/// (1..4) and offsets. Pairs sharing an xy position are skipped.
inline std::shared_ptr<const Topology> random_topology(std::uint64_t seed, int n, int gateways,
                                                       double p) {
  Rng rng(seed);
  std::vector<Node> nodes;
  for (int i = 0; i < n; ++i) {
    std::string id = (i < gateways ? "g" : "n") + std::to_string(100 + i);
    Node node = make_node(id, rng.uniform(0, 300), rng.uniform(0, 300),
                          i < gateways ? Layer::Gateway : Layer::Street,
                          1 + static_cast<int>(rng.below(4)), rng.uniform(0, 20));
    node.sector_offset = rng.uniform(0, 360);
    nodes.push_back(node);
  }
  std::vector<Link> links;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.uniform01() < p) links.push_back(make_link(nodes[i], nodes[j]));
    }
  }
  return std::make_shared<const Topology>(nodes, links);
}

// ---- reference checks -------------------------------------------------------

/// BFS 2-coloring of the active graph; true when no odd cycle exists.
inline bool two_colorable(const ActiveTopology& a) {
  const Topology& t = a.topology();
  std::vector<int> color(t.node_count(), -1);
  std::vector<std::vector<NodeIndex>> adj(t.node_count());
  for (LinkIndex l : a.active_links) {
    adj[t.end_a(l)].push_back(t.end_b(l));
    adj[t.end_b(l)].push_back(t.end_a(l));
  }
  for (NodeIndex s = 0; s < t.node_count(); ++s) {
    if (color[s] >= 0) continue;
    color[s] = 0;
    std::vector<NodeIndex> queue{s};
    for (std::size_t h = 0; h < queue.size(); ++h) {
      const NodeIndex u = queue[h];
      for (NodeIndex v : adj[u]) {
        if (color[v] < 0) {
          color[v] = 1 - color[u];
          queue.push_back(v);
        } else if (color[v] == color[u]) {
          return false;
        }
      }
    }
  }
  return true;
}

/// Emitted coloring is proper on every active link.
inline bool coloring_proper(const ActiveTopology& a) {
  if (!a.colors) return false;
  const Topology& t = a.topology();
  for (LinkIndex l : a.active_links) {
    const int ca = (*a.colors)[t.end_a(l)];
    const int cb = (*a.colors)[t.end_b(l)];
    if (ca < 0 || cb < 0 || ca == cb) return false;
  }
  return true;
}

/// Nodes with no active path to any gateway, by plain BFS.
inline std::vector<NodeIndex> bfs_unreachable(const ActiveTopology& a) {
  const Topology& t = a.topology();
  std::vector<bool> seen(t.node_count(), false);
  std::vector<NodeIndex> queue;
  for (NodeIndex v = 0; v < t.node_count(); ++v) {
    if (t.node(v).is_gateway()) {
      seen[v] = true;
      queue.push_back(v);
    }
  }
  for (std::size_t h = 0; h < queue.size(); ++h) {
    for (LinkIndex l : a.active_links) {
      const NodeIndex x = t.end_a(l), y = t.end_b(l);
      if (x == queue[h] && !seen[y]) seen[y] = true, queue.push_back(y);
      if (y == queue[h] && !seen[x]) seen[x] = true, queue.push_back(x);
    }
  }
  std::vector<NodeIndex> out;
  for (NodeIndex v = 0; v < t.node_count(); ++v) {
    if (!seen[v]) out.push_back(v);
  }
  return out;
}

/// Tree is a spanning arborescence over `members` rooted at tree.root: parent
/// links exist and are active, union-find sees no cycle, and every member is
/// joined to the root.
inline bool tree_ok(const ActiveTopology& a, const SpanningTree& tree,
                    const std::vector<NodeIndex>& members) {
  const Topology& t = a.topology();
  std::vector<NodeIndex> uf(t.node_count());
  std::iota(uf.begin(), uf.end(), NodeIndex{0});
  auto find = [&](NodeIndex x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };
  std::size_t edges = 0;
  for (NodeIndex v = 0; v < t.node_count(); ++v) {
    const NodeIndex p = tree.parent[v];
    if (p == kNoNode) continue;
    const LinkIndex l = tree.parent_link[v];
    if (!a.is_active(l)) return false;
    const bool joins = (t.end_a(l) == v && t.end_b(l) == p) || (t.end_b(l) == v && t.end_a(l) == p);
    if (!joins) return false;
    const NodeIndex rv = find(v), rp = find(p);
    if (rv == rp) return false;
    uf[rv] = rp;
    ++edges;
  }
  if (tree.parent[tree.root] != kNoNode) return false;
  for (NodeIndex m : members) {
    if (m != tree.root && tree.parent[m] == kNoNode) return false;
    if (find(m) != find(tree.root)) return false;
  }
  return edges + 1 == members.size();
}

/// Exhaustive maximum set of pairwise interior-disjoint distinct paths.
inline int brute_disjoint(const std::vector<std::vector<NodeIndex>>& paths) {
  std::vector<std::vector<NodeIndex>> distinct;
  for (const auto& p : paths) {
    if (!p.empty() && std::find(distinct.begin(), distinct.end(), p) == distinct.end()) {
      distinct.push_back(p);
    }
  }
  const std::size_t n = distinct.size();
  int best = 0;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      if (!(mask >> i & 1)) continue;
      for (std::size_t j = i + 1; j < n && ok; ++j) {
        if (!(mask >> j & 1)) continue;
        const auto& p = distinct[i];
        const auto& q = distinct[j];
        for (std::size_t x = 1; x + 1 < p.size() && ok; ++x) {
          for (std::size_t y = 1; y + 1 < q.size(); ++y) {
            if (p[x] == q[y]) {
              ok = false;
              break;
            }
          }
        }
      }
    }
    if (ok) best = std::max(best, static_cast<int>(std::popcount(mask)));
  }
  return best;
}

/// True when `d` could join `set` without breaking a sector or mode rule.
inline bool addable(const Topology& t, const TransmissionSet& set, const DirectedLink& d) {
  if (set.contains(d)) return false;
  std::set<std::pair<NodeIndex, int>> busy;
  std::map<NodeIndex, Mode> mode;
  for (const auto& x : set.links) {
    busy.insert({x.tx, t.sector_at(x.link, x.tx)});
    busy.insert({x.rx, t.sector_at(x.link, x.rx)});
    mode[x.tx] = Mode::Tx;
    mode[x.rx] = Mode::Rx;
  }
  if (busy.contains({d.tx, t.sector_at(d.link, d.tx)})) return false;
  if (busy.contains({d.rx, t.sector_at(d.link, d.rx)})) return false;
  if (auto it = mode.find(d.tx); it != mode.end() && it->second == Mode::Rx) return false;
  if (auto it = mode.find(d.rx); it != mode.end() && it->second == Mode::Tx) return false;
  return true;
}

/// Conflict-free by first principles.
inline bool conflict_free(const Topology& t, const TransmissionSet& set) {
  std::set<std::pair<NodeIndex, int>> busy;
  std::map<NodeIndex, Mode> mode;
  for (const auto& x : set.links) {
    if (!busy.insert({x.tx, t.sector_at(x.link, x.tx)}).second) return false;
    if (!busy.insert({x.rx, t.sector_at(x.link, x.rx)}).second) return false;
    for (auto [node, m] : {std::pair{x.tx, Mode::Tx}, std::pair{x.rx, Mode::Rx}}) {
      auto [it, fresh] = mode.emplace(node, m);
      if (!fresh && it->second != m) return false;
    }
  }
  return true;
}

/// Empty string when the collection is conflict-free, maximal and covers
/// both directions of every active link.
inline std::string check_collection(const ActiveTopology& a, const TransmissionSetCollection& c) {
  const Topology& t = a.topology();
  std::vector<DirectedLink> all;
  for (LinkIndex l : a.active_links) {
    all.push_back(t.directed(l, t.end_a(l)));
    all.push_back(t.directed(l, t.end_b(l)));
  }
  std::set<std::pair<NodeIndex, NodeIndex>> covered;
  for (std::size_t s = 0; s < c.sets.size(); ++s) {
    const auto& set = c.sets[s];
    if (!conflict_free(t, set)) return "set " + std::to_string(s) + " has a conflict";
    for (const auto& d : set.links) {
      if (!a.is_active(d.link)) return "set " + std::to_string(s) + " uses an inactive link";
      covered.insert({d.tx, d.rx});
    }
    for (const auto& d : all) {
      if (addable(t, set, d)) return "set " + std::to_string(s) + " is not maximal";
    }
  }
  for (const auto& d : all) {
    if (!covered.contains({d.tx, d.rx})) return "a direction is never covered";
  }
  return {};
}

/// Slot-by-slot simulation of one path under a cyclic schedule.
inline int simulate_delay(const Schedule& schedule, const TransmissionSetCollection& tss,
                          const std::vector<DirectedLink>& path, std::size_t t0) {
  const std::size_t L = schedule.length();
  std::size_t slot = t0;
  std::size_t hop = 0;
  std::size_t guard = 0;
  while (hop < path.size()) {
    const auto& set = tss.sets[schedule.order[slot % L]];
    const bool present = std::any_of(set.links.begin(), set.links.end(), [&](const DirectedLink& d) {
      return d.tx == path[hop].tx && d.rx == path[hop].rx;
    });
    if (present) {
      ++hop;
      if (hop == path.size()) break;
    }
    ++slot;
    if (++guard > L * (path.size() + 1)) return -1;
  }
  return static_cast<int>(slot - t0 + 1);
}

/// Exhaustive optimum over all orderings with the first slot pinned.
inline Objective brute_objective(const TransmissionSetCollection& tss,
                                 const std::vector<PathSpec>& paths) {
  std::vector<PathSpec> primaries;
  for (const auto& p : paths) {
    if (p.primary) primaries.push_back(p);
  }
  const std::size_t L = tss.size();
  std::vector<std::size_t> order(L);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Objective best{1 << 30, 0};
  do {
    Schedule s{order};
    Objective o;
    for (const auto& p : primaries) {
      int worst = 0;
      for (std::size_t t0 = 0; t0 < L; ++t0) worst = std::max(worst, simulate_delay(s, tss, p.hops, t0));
      o.worst = std::max(o.worst, worst);
      o.sum += worst;
    }
    best = std::min(best, o);
  } while (L > 1 && std::next_permutation(order.begin() + 1, order.end()));
  return best;
}

}  // namespace fixtures
