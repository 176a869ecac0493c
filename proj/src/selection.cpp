#include "meshplan/selection.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace meshplan {

LinkKey key_of(const Link& link) { return make_key(link.a, link.b); }

LinkKey make_key(NodeId u, NodeId v) {
  if (v < u) std::swap(u, v);
  return {std::move(u), std::move(v)};
}

Demands unit_demands(const Topology& topology) {
  Demands d(topology.node_count(), 1.0);
  for (NodeIndex g : topology.gateways()) d[g] = 0.0;
  return d;
}

namespace {

bool usable(const std::vector<bool>& allowed, LinkIndex l) {
  return allowed.empty() || allowed[l];
}

// Multi-source BFS hop distance from all gateways.
std::vector<int> gateway_distance(const Topology& t, const std::vector<bool>& allowed) {
  std::vector<int> dist(t.node_count(), -1);
  std::deque<NodeIndex> queue;
  for (NodeIndex g : t.gateways()) {
    dist[g] = 0;
    queue.push_back(g);
  }
  while (!queue.empty()) {
    const NodeIndex u = queue.front();
    queue.pop_front();
    for (LinkIndex l : t.incident(u)) {
      if (!usable(allowed, l)) continue;
      const NodeIndex v = t.other_end(l, u);
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

}  // namespace

LinkWeights weight_links(const Topology& topology, const Demands* demands,
                         const std::vector<bool>& allowed) {
  LinkWeights out;
  out.weight.assign(topology.link_count(), 0.0);
  const Demands fallback = demands ? Demands{} : unit_demands(topology);
  const Demands& d = demands ? *demands : fallback;
  if (d.size() != topology.node_count()) throw Error("demand vector size mismatch");

  const auto dist = gateway_distance(topology, allowed);
  for (NodeIndex v = 0; v < topology.node_count(); ++v) {
    if (topology.is_gateway(v)) continue;
    if (d[v] < 0.0) throw Error("negative demand at " + topology.node(v).id.value);
    if (dist[v] < 0) {
      out.disconnected.push_back(v);
      continue;
    }
    NodeIndex at = v;
    while (dist[at] > 0) {
      LinkIndex best_link = 0;
      NodeIndex best = kNoNode;
      for (LinkIndex l : topology.incident(at)) {
        if (!usable(allowed, l)) continue;
        const NodeIndex u = topology.other_end(l, at);
        if (dist[u] == dist[at] - 1 && u < best) {
          best = u;
          best_link = l;
        }
      }
      out.weight[best_link] += d[v];
      at = best;
    }
  }
  return out;
}

void finalize_active(ActiveTopology& active) {
  const auto& t = *active.base;
  std::sort(active.active_links.begin(), active.active_links.end());
  active.active_mask.assign(t.link_count(), false);
  for (LinkIndex l : active.active_links) active.active_mask[l] = true;
}

std::vector<NodeIndex> unreachable_nodes(const Topology& topology,
                                         const std::vector<bool>& mask) {
  const auto dist = gateway_distance(topology, mask);
  std::vector<NodeIndex> out;
  for (NodeIndex v = 0; v < topology.node_count(); ++v) {
    if (dist[v] < 0) out.push_back(v);
  }
  return out;
}

namespace {

struct Attempt {
  std::vector<bool> active;
  std::vector<int> colors;
  std::vector<NodeIndex> unconnected;
};

Attempt run_greedy(const Topology& t, const LinkWeights& weights, int k, bool bipartite,
                   const std::vector<bool>& avoided) {
  Attempt a;
  a.active.assign(t.link_count(), false);
  a.colors.assign(t.node_count(), -1);
  std::vector<std::vector<int>> degree(t.node_count());
  for (NodeIndex v = 0; v < t.node_count(); ++v) {
    degree[v].assign(static_cast<std::size_t>(t.node(v).sector_count), 0);
  }
  std::vector<bool> attached(t.node_count(), false);
  std::vector<NodeIndex> current = t.gateways();
  for (NodeIndex g : current) attached[g] = true;

  std::vector<LinkIndex> candidates;
  while (!current.empty()) {
    std::vector<NodeIndex> next;
    for (NodeIndex u : current) {
      const int sectors = t.node(u).sector_count;
      for (int s = 0; s < sectors; ++s) {
        candidates.clear();
        for (LinkIndex l : t.incident(u)) {
          if (!a.active[l] && t.sector_at(l, u) == s) candidates.push_back(l);
        }
        std::stable_sort(candidates.begin(), candidates.end(),
                         [&](LinkIndex x, LinkIndex y) {
                           if (weights.weight[x] != weights.weight[y]) {
                             return weights.weight[x] > weights.weight[y];
                           }
                           return x < y;
                         });
        for (LinkIndex l : candidates) {
          if (degree[u][s] >= k) break;
          if (avoided[l]) continue;
          const NodeIndex v = t.other_end(l, u);
          const int sv = t.sector_at(l, v);
          if (degree[v][sv] >= k) continue;
          if (bipartite) {
            int& cu = a.colors[u];
            int& cv = a.colors[v];
            if (cu >= 0 && cv >= 0) {
              if (cu == cv) continue;
            } else if (cu >= 0) {
              cv = 1 - cu;
            } else if (cv >= 0) {
              cu = 1 - cv;
            } else {
              cu = 0;
              cv = 1;
            }
          }
          a.active[l] = true;
          ++degree[u][s];
          ++degree[v][sv];
          if (!attached[v]) {
            attached[v] = true;
            next.push_back(v);
          }
        }
      }
    }
    std::sort(next.begin(), next.end());
    current = std::move(next);
  }
  for (NodeIndex v = 0; v < t.node_count(); ++v) {
    if (!attached[v]) a.unconnected.push_back(v);
  }
  return a;
}

}  // namespace

ActiveTopology select_active_links(std::shared_ptr<const Topology> topology,
                                   const LinkWeights& weights,
                                   const SelectionConfig& config, const AvoidList& avoid) {
  const Topology& t = *topology;
  if (config.k < 1) throw Error("selection k must be >= 1");
  if (config.max_k_escalation < 0) throw Error("max_k_escalation must be >= 0");
  if (t.gateways().empty()) throw Error("topology has no gateway node");
  if (weights.weight.size() != t.link_count()) throw Error("link weight size mismatch");

  std::vector<bool> avoided(t.link_count(), false);
  for (LinkIndex l = 0; l < t.link_count(); ++l) {
    avoided[l] = avoid.contains(key_of(t.link(l)));
  }
  std::vector<bool> permitted(t.link_count());
  for (LinkIndex l = 0; l < t.link_count(); ++l) permitted[l] = !avoided[l];
  // Nodes no fan-out can ever attach; escalation cannot help them.
  const auto hopeless = unreachable_nodes(t, permitted);

  int k = config.k;
  Attempt attempt = run_greedy(t, weights, k, config.bipartite, avoided);
  for (int step = 0; step < config.max_k_escalation; ++step) {
    const bool fixable = std::any_of(
        attempt.unconnected.begin(), attempt.unconnected.end(),
        [&](NodeIndex v) { return !std::binary_search(hopeless.begin(), hopeless.end(), v); });
    if (!fixable) break;
    ++k;
    attempt = run_greedy(t, weights, k, config.bipartite, avoided);
  }

  ActiveTopology out;
  out.base = std::move(topology);
  for (LinkIndex l = 0; l < t.link_count(); ++l) {
    if (attempt.active[l]) out.active_links.push_back(l);
  }
  if (config.bipartite) out.colors = std::move(attempt.colors);
  out.unconnected = std::move(attempt.unconnected);
  out.k_used = k;
  out.avoid = avoid;
  finalize_active(out);
  return out;
}

double fanout_delay_bound(int k, int n) {
  if (k < 2) throw Error("fan-out bound needs k >= 2");
  if (n < 2) throw Error("fan-out bound needs N >= 2");
  return k * std::log(static_cast<double>(n)) / std::log(static_cast<double>(k));
}

}  // namespace meshplan
