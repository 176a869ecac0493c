#pragma once

// Active link selection: greedy breadth-first growth from the gateways with
// a per-sector fan-out cap, an optional incremental two-coloring that keeps
// the active graph bipartite, and an avoid-list fed back from scheduling.

#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "meshplan/netmodel.hpp"

namespace meshplan {

/// Canonical undirected node pair (a < b).
struct LinkKey {
  NodeId a;
  NodeId b;

  friend auto operator<=>(const LinkKey&, const LinkKey&) = default;
  friend bool operator==(const LinkKey&, const LinkKey&) = default;
};

LinkKey key_of(const Link& link);
LinkKey make_key(NodeId u, NodeId v);

using AvoidList = std::set<LinkKey>;

struct SelectionConfig {
  int k = 2;
  bool bipartite = false;
  int max_k_escalation = 2;
};

/// Per-link weights (indexed like Topology::links()).
struct LinkWeights {
  std::vector<double> weight;
  std::vector<NodeIndex> disconnected;  // non-gateway nodes with no gateway path
};

/// Per-node traffic demand indexed by NodeIndex; gateways are ignored.
using Demands = std::vector<double>;

Demands unit_demands(const Topology& topology);

/// Allocates each non-gateway node's demand along one shortest hop path to
/// the nearest gateway. The path steps to the lowest-index neighbour that is
/// one hop closer. `allowed` restricts the usable links (empty = all).
LinkWeights weight_links(const Topology& topology, const Demands* demands = nullptr,
                         const std::vector<bool>& allowed = {});

struct ActiveTopology {
  std::shared_ptr<const Topology> base;
  std::vector<LinkIndex> active_links;  // sorted
  std::vector<bool> active_mask;        // indexed by LinkIndex
  std::optional<std::vector<int>> colors;  // per node: -1 colorless, 0 or 1
  std::vector<NodeIndex> unconnected;      // sorted
  int k_used = 0;
  AvoidList avoid;

  const Topology& topology() const { return *base; }
  bool is_active(LinkIndex l) const { return active_mask.at(l); }
  std::size_t size() const { return active_links.size(); }
};

/// Rebuilds mask-derived fields after active_links was filled in.
void finalize_active(ActiveTopology& active);

ActiveTopology select_active_links(std::shared_ptr<const Topology> topology,
                                   const LinkWeights& weights,
                                   const SelectionConfig& config,
                                   const AvoidList& avoid = {});

/// Nodes that cannot reach any gateway over the links in `mask`.
std::vector<NodeIndex> unreachable_nodes(const Topology& topology,
                                         const std::vector<bool>& mask);

/// k * log_k(N): fan-out planning heuristic for worst-case delay.
double fanout_delay_bound(int k, int n);

}  // namespace meshplan
