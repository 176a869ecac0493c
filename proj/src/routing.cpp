#include "meshplan/routing.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <queue>

namespace meshplan {

namespace {

struct Candidate {
  double weight;
  int stem;
  LinkIndex link;
  NodeIndex target;
};

// Max-heap order: heavier first, then lower stem, then lower link index.
struct Lighter {
  bool operator()(const Candidate& l, const Candidate& r) const {
    if (l.weight != r.weight) return l.weight < r.weight;
    if (l.stem != r.stem) return l.stem > r.stem;
    return l.link > r.link;
  }
};

using CandidateQueue = std::priority_queue<Candidate, std::vector<Candidate>, Lighter>;

}  // namespace

RoutingConfig compute_mdst(const ActiveTopology& active, const Demands* demands,
                           const RoutingOptions& options) {
  const Topology& t = active.topology();
  const std::size_t n = t.node_count();

  RoutingConfig out;
  out.link_weights = weight_links(t, demands, active.active_mask).weight;
  out.stem_of.assign(n, -1);
  out.primary.assign(n, std::nullopt);
  const auto& w = out.link_weights;

  const auto unreachable = unreachable_nodes(t, active.active_mask);
  std::vector<bool> routed(n, true);
  for (NodeIndex v : unreachable) {
    routed[v] = false;
    if (!t.is_gateway(v)) out.excluded.push_back(v);
  }

  // Stem seeds: gateway-to-node active links, heaviest first.
  struct Seed {
    LinkIndex link;
    NodeIndex root;
    NodeIndex node;
  };
  std::vector<Seed> seeds;
  for (LinkIndex l : active.active_links) {
    const NodeIndex a = t.end_a(l);
    const NodeIndex b = t.end_b(l);
    if (t.is_gateway(a) == t.is_gateway(b)) continue;
    seeds.push_back(t.is_gateway(a) ? Seed{l, a, b} : Seed{l, b, a});
  }
  if (seeds.empty()) throw Error("no gateway-incident active links, cannot seed stems");
  std::stable_sort(seeds.begin(), seeds.end(), [&](const Seed& x, const Seed& y) {
    if (w[x.link] != w[y.link]) return w[x.link] > w[y.link];
    return x.link < y.link;
  });
  if (options.max_trees && *options.max_trees > 0 &&
      seeds.size() > static_cast<std::size_t>(*options.max_trees)) {
    seeds.resize(static_cast<std::size_t>(*options.max_trees));
  }

  // A node reachable from two gateways only seeds the heavier stem.
  for (const Seed& s : seeds) {
    if (out.stem_of[s.node] >= 0) continue;
    SpanningTree tree;
    tree.id = static_cast<int>(out.trees.size());
    tree.root = s.root;
    tree.parent.assign(n, kNoNode);
    tree.parent_link.assign(n, 0);
    tree.parent[s.node] = s.root;
    tree.parent_link[s.node] = s.link;
    out.stem_of[s.node] = tree.id;
    out.trees.push_back(std::move(tree));
  }

  // Simultaneous stem growth.
  CandidateQueue growth;
  auto push_extensions = [&](NodeIndex u, int stem) {
    for (LinkIndex l : t.incident(u)) {
      if (!active.is_active(l)) continue;
      const NodeIndex v = t.other_end(l, u);
      if (t.is_gateway(v) || out.stem_of[v] >= 0) continue;
      growth.push({w[l], stem, l, v});
    }
  };
  for (const auto& tree : out.trees) {
    for (NodeIndex v = 0; v < n; ++v) {
      if (tree.parent[v] != kNoNode) push_extensions(v, tree.id);
    }
  }
  while (!growth.empty()) {
    const Candidate c = growth.top();
    growth.pop();
    if (out.stem_of[c.target] >= 0) continue;
    auto& tree = out.trees[static_cast<std::size_t>(c.stem)];
    tree.parent[c.target] = t.other_end(c.link, c.target);
    tree.parent_link[c.target] = c.link;
    out.stem_of[c.target] = c.stem;
    push_extensions(c.target, c.stem);
  }

  // Expansion of each stem into a spanning tree over all routed nodes.
  for (auto& tree : out.trees) {
    std::vector<bool> in_tree(n, false);
    in_tree[tree.root] = true;
    for (NodeIndex v = 0; v < n; ++v) {
      if (out.stem_of[v] == tree.id) in_tree[v] = true;
    }
    CandidateQueue plain;    // both endpoints are ordinary nodes
    CandidateQueue gateway;  // at least one endpoint is a gateway
    auto push_frontier = [&](NodeIndex u) {
      for (LinkIndex l : t.incident(u)) {
        if (!active.is_active(l)) continue;
        const NodeIndex v = t.other_end(l, u);
        if (in_tree[v]) continue;
        const bool touches_gw = t.is_gateway(u) || t.is_gateway(v);
        (touches_gw ? gateway : plain).push({w[l], 0, l, v});
      }
    };
    for (NodeIndex v = 0; v < n; ++v) {
      if (in_tree[v]) push_frontier(v);
    }
    while (!plain.empty() || !gateway.empty()) {
      CandidateQueue& q = plain.empty() ? gateway : plain;
      const Candidate c = q.top();
      q.pop();
      if (in_tree[c.target]) continue;
      in_tree[c.target] = true;
      tree.parent[c.target] = t.other_end(c.link, c.target);
      tree.parent_link[c.target] = c.link;
      push_frontier(c.target);
    }
  }

  // Primary paths: fewest hops, then the least loaded tree, then tree id.
  std::vector<int> load(out.trees.size(), 0);
  for (NodeIndex v = 0; v < n; ++v) {
    if (t.is_gateway(v) || !routed[v]) continue;
    int best = -1;
    std::size_t best_hops = 0;
    std::vector<NodeIndex> best_path;
    for (const auto& tree : out.trees) {
      auto path = tree_path(tree, v);
      if (path.empty()) continue;
      const std::size_t hops = path.size() - 1;
      const bool better =
          best < 0 || hops < best_hops ||
          (hops == best_hops && load[static_cast<std::size_t>(tree.id)] <
                                    load[static_cast<std::size_t>(best)]);
      if (better) {
        best = tree.id;
        best_hops = hops;
        best_path = std::move(path);
      }
    }
    if (best < 0) continue;
    ++load[static_cast<std::size_t>(best)];
    out.primary[v] = PrimaryPath{best, std::move(best_path)};
  }
  return out;
}

std::vector<NodeIndex> tree_path(const SpanningTree& tree, NodeIndex node) {
  std::vector<NodeIndex> path;
  if (!tree.contains(node)) return path;
  NodeIndex at = node;
  path.push_back(at);
  while (at != tree.root) {
    at = tree.parent.at(at);
    path.push_back(at);
    if (path.size() > tree.parent.size() + 1) throw Error("cycle in spanning tree");
  }
  return path;
}

namespace {

using Bits = std::vector<std::uint64_t>;

bool intersects(const Bits& a, const Bits& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] & b[i]) return true;
  }
  return false;
}

// Maximum set of pairwise non-intersecting masks (branch and bound).
int max_disjoint(const std::vector<Bits>& masks) {
  const std::size_t m = masks.size();
  std::vector<std::vector<bool>> clash(m, std::vector<bool>(m, false));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      clash[i][j] = clash[j][i] = intersects(masks[i], masks[j]);
    }
  }
  int best = 0;
  std::vector<std::size_t> chosen;
  std::function<void(std::size_t)> search = [&](std::size_t from) {
    best = std::max(best, static_cast<int>(chosen.size()));
    if (chosen.size() + (m - from) <= static_cast<std::size_t>(best)) return;
    for (std::size_t i = from; i < m; ++i) {
      if (chosen.size() + (m - i) <= static_cast<std::size_t>(best)) return;
      const bool ok = std::none_of(chosen.begin(), chosen.end(),
                                   [&](std::size_t c) { return clash[c][i]; });
      if (!ok) continue;
      chosen.push_back(i);
      search(i + 1);
      chosen.pop_back();
    }
  };
  search(0);
  return best;
}

}  // namespace

int count_disjoint_paths(const RoutingConfig& config, NodeIndex node) {
  if (config.trees.empty() || node >= config.trees.front().parent.size()) {
    throw Error("unknown node index " + std::to_string(node));
  }
  std::vector<std::vector<NodeIndex>> paths;
  for (const auto& tree : config.trees) {
    auto p = tree_path(tree, node);
    if (p.size() < 2) continue;
    if (std::find(paths.begin(), paths.end(), p) == paths.end()) paths.push_back(std::move(p));
  }
  if (paths.empty()) throw Error("node " + std::to_string(node) + " is not routed");

  const std::size_t words = (config.trees.front().parent.size() + 63) / 64;
  std::vector<Bits> masks;
  for (const auto& p : paths) {
    Bits b(words, 0);
    for (std::size_t i = 1; i + 1 < p.size(); ++i) b[p[i] / 64] |= std::uint64_t{1} << (p[i] % 64);
    masks.push_back(std::move(b));
  }
  return max_disjoint(masks);
}

DisjointnessReport disjointness(const RoutingConfig& config) {
  DisjointnessReport r;
  const std::size_t n = config.primary.size();
  r.count.assign(n, 0);
  double sum = 0.0;
  int routed = 0;
  for (NodeIndex v = 0; v < n; ++v) {
    if (!config.primary[v]) continue;
    r.count[v] = count_disjoint_paths(config, v);
    sum += r.count[v];
    ++routed;
    if (r.count[v] < 2) r.below_two.push_back(v);
  }
  r.mean = routed ? sum / routed : 0.0;
  return r;
}

}  // namespace meshplan
