#pragma once

// Transmission set construction (GreedyTwice with directed links and the
// per-node TX/RX mode constraint).
//
// Each round starts from cleared node modes and builds one set. Pass one
// scans the directed links not yet covered by any set, pass two scans all
// directed links; both in weight-descending, then (tx, rx) order. A link
// (u, v) is taken when both of its sectors are still idle in this set, u is
// not receiving and v is not transmitting. Rounds repeat until both
// directions of every active link are covered.

#include <vector>

#include "meshplan/routing.hpp"
#include "meshplan/selection.hpp"

namespace meshplan {

enum class Mode { Tx, Rx };

std::string_view to_string(Mode mode);

struct TransmissionSet {
  std::vector<DirectedLink> links;                   // sorted (tx, rx)
  std::vector<std::pair<NodeIndex, Mode>> modes;     // sorted by node

  bool contains(const DirectedLink& d) const;
  std::size_t size() const { return links.size(); }
};

struct LinkCoverage {
  LinkIndex link = 0;
  int forward = -1;   // first set carrying end_a -> end_b
  int backward = -1;  // first set carrying end_b -> end_a
};

struct TransmissionSetCollection {
  std::vector<TransmissionSet> sets;
  std::vector<LinkCoverage> coverage;    // one entry per active link, link order
  std::vector<LinkIndex> troublesome;    // sorted

  std::size_t size() const { return sets.size(); }
};

/// Index of a directed link into per-direction tables: 2*link, +1 when the
/// transmitter is end_b.
std::size_t direction_index(const Topology& topology, const DirectedLink& d);

/// Directed hops of a primary path (node toward root) and their reverse.
std::vector<DirectedLink> upstream_hops(const Topology& topology,
                                        const std::vector<NodeIndex>& path);
std::vector<DirectedLink> downstream_hops(const Topology& topology,
                                          const std::vector<NodeIndex>& path);

/// Per-direction weight: how many primary paths cross the link that way,
/// counting the upstream traversal and the downstream (reversed) traversal.
std::vector<double> schedule_weights(const ActiveTopology& active,
                                     const RoutingConfig& routing);

struct TsgenOptions {
  bool per_node_sector_fill = false;
  // Troublesome links are reported only when the set count exceeds this.
  int threshold = 8;
};

TransmissionSetCollection build_transmission_sets(const ActiveTopology& active,
                                                  const std::vector<double>& weights,
                                                  const TsgenOptions& options = {});

/// Conflict-freedom check over one set; returns a description of the first
/// broken rule or an empty string.
std::string check_set(const Topology& topology, const TransmissionSet& set);

}  // namespace meshplan
