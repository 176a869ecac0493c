#pragma once

// Multiple disjoint spanning trees (MDST) over the active topology.
//
// Every gateway-incident active link seeds a stem. All stems grow at once
// from one global max-weight queue, each non-gateway node joining exactly
// one stem. Each stem is then expanded into a spanning tree; links between
// two non-gateway nodes are exhausted before links touching a gateway, so a
// tree keeps reaching its root through its own seed link where possible.

#include <optional>
#include <vector>

#include "meshplan/selection.hpp"

namespace meshplan {

struct SpanningTree {
  int id = 0;
  NodeIndex root = kNoNode;
  std::vector<NodeIndex> parent;       // kNoNode for the root and unspanned nodes
  std::vector<LinkIndex> parent_link;  // valid where parent != kNoNode

  bool contains(NodeIndex v) const { return v == root || parent.at(v) != kNoNode; }
};

struct PrimaryPath {
  int tree = 0;
  std::vector<NodeIndex> nodes;  // from the node to the tree root

  std::size_t hops() const { return nodes.empty() ? 0 : nodes.size() - 1; }
};

struct RoutingConfig {
  std::vector<SpanningTree> trees;
  std::vector<std::optional<PrimaryPath>> primary;  // per node; none for gateways
  std::vector<double> link_weights;                 // per base link
  std::vector<int> stem_of;                         // tree id per node, -1 if none
  std::vector<NodeIndex> excluded;                  // unconnected, not routed
};

struct RoutingOptions {
  std::optional<int> max_trees;  // keep only the heaviest stems
};

RoutingConfig compute_mdst(const ActiveTopology& active, const Demands* demands = nullptr,
                           const RoutingOptions& options = {});

/// Node sequence from `node` up to the tree root; empty if not spanned.
std::vector<NodeIndex> tree_path(const SpanningTree& tree, NodeIndex node);

/// Largest number of this node's tree paths whose interiors are pairwise
/// node-disjoint. Identical paths count once.
int count_disjoint_paths(const RoutingConfig& config, NodeIndex node);

struct DisjointnessReport {
  std::vector<int> count;              // per node; 0 for gateways and unrouted nodes
  std::vector<NodeIndex> below_two;    // routed nodes with fewer than 2 disjoint paths
  double mean = 0.0;                   // over routed nodes
};

DisjointnessReport disjointness(const RoutingConfig& config);

}  // namespace meshplan
