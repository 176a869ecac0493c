#pragma once

// Core network model: nodes with sectored radio units, candidate links and
// the topology container every planning phase works on.
//
// Nodes are kept sorted by id inside a Topology, so a NodeIndex doubles as
// the lexicographic tie-break rank used throughout the planner.

#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace meshplan {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when two positions coincide in the xy-plane and no azimuth exists.
class DegenerateGeometry : public Error {
 public:
  using Error::Error;
};

struct NodeId {
  std::string value;

  friend auto operator<=>(const NodeId&, const NodeId&) = default;
  friend bool operator==(const NodeId&, const NodeId&) = default;
};

enum class Layer { Street, RoofTop, Gateway };

std::string_view to_string(Layer layer);
Layer layer_from_string(std::string_view text);

struct Position {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

double distance(const Position& a, const Position& b);

struct Node {
  NodeId id;
  Position position;
  Layer layer = Layer::Street;
  int sector_count = 4;
  double sector_offset = 0.0;  // degrees

  bool is_gateway() const { return layer == Layer::Gateway; }
};

struct SectorId {
  NodeId node;
  int index = 0;

  friend auto operator<=>(const SectorId&, const SectorId&) = default;
  friend bool operator==(const SectorId&, const SectorId&) = default;
};

struct Link {
  NodeId a;
  NodeId b;
  SectorId sector_a;
  SectorId sector_b;
  double length = 0.0;
};

/// Orders the endpoints so that a < b, swapping the sectors along with them.
Link canonical(Link link);

/// Sector of `node` whose half-open arc [start, end) contains the xy-plane
/// azimuth toward `toward`. Arcs start at sector_offset and have equal width.
SectorId sector_of(const Node& node, const Position& toward);

/// Same mapping on a raw azimuth in degrees (any real value).
int sector_index_for_azimuth(int sector_count, double sector_offset,
                             double azimuth_deg);

using NodeIndex = std::uint32_t;
using LinkIndex = std::uint32_t;
inline constexpr NodeIndex kNoNode = std::numeric_limits<NodeIndex>::max();

/// A link with a transmit direction. `link` indexes Topology::links().
struct DirectedLink {
  NodeIndex tx = kNoNode;
  NodeIndex rx = kNoNode;
  LinkIndex link = 0;

  DirectedLink reversed() const { return {rx, tx, link}; }

  // Canonical directed order is (tx, rx); node index order is id order.
  friend bool operator==(const DirectedLink& l, const DirectedLink& r) {
    return l.tx == r.tx && l.rx == r.rx;
  }
  friend auto operator<=>(const DirectedLink& l, const DirectedLink& r) {
    if (auto c = l.tx <=> r.tx; c != 0) return c;
    return l.rx <=> r.rx;
  }
};

struct Violation {
  std::string entity;  // e.g. "link g-a", "node x"
  std::string message;
};

class Topology {
 public:
  Topology() = default;

  /// Never throws on malformed content; use validate() to inspect it.
  /// Nodes are sorted by id and links canonicalized and sorted by (a, b).
  Topology(std::vector<Node> nodes, std::vector<Link> links);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Link>& links() const { return links_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t link_count() const { return links_.size(); }

  const Node& node(NodeIndex i) const { return nodes_.at(i); }
  const Link& link(LinkIndex i) const { return links_.at(i); }

  std::optional<NodeIndex> find(const NodeId& id) const;
  NodeIndex index_of(const NodeId& id) const;  // throws Error when unknown

  // Resolved endpoint indices; kNoNode when the id is unknown.
  NodeIndex end_a(LinkIndex i) const { return ends_.at(i).first; }
  NodeIndex end_b(LinkIndex i) const { return ends_.at(i).second; }
  NodeIndex other_end(LinkIndex i, NodeIndex from) const;
  int sector_at(LinkIndex i, NodeIndex end) const;

  std::optional<LinkIndex> find_link(NodeIndex u, NodeIndex v) const;
  std::span<const LinkIndex> incident(NodeIndex u) const { return incident_.at(u); }

  std::vector<NodeIndex> gateways() const;
  bool is_gateway(NodeIndex i) const { return nodes_.at(i).is_gateway(); }

  DirectedLink directed(LinkIndex i, NodeIndex tx) const;

 private:
  std::vector<Node> nodes_;
  std::vector<Link> links_;
  std::vector<std::pair<NodeIndex, NodeIndex>> ends_;
  std::vector<std::vector<LinkIndex>> incident_;
};

std::vector<Violation> validate(const Topology& topology);

/// Throws Error listing every violation when the topology is malformed.
void require_valid(const Topology& topology);

/// Builds a link between two nodes with sectors and length from geometry.
Link make_link(const Node& a, const Node& b);

std::string describe(const Topology& topology, LinkIndex link);

}  // namespace meshplan
