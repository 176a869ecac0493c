#include "meshplan/netmodel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

namespace meshplan {

std::string_view to_string(Layer layer) {
  switch (layer) {
    case Layer::Street: return "Street";
    case Layer::RoofTop: return "RoofTop";
    case Layer::Gateway: return "Gateway";
  }
  return "Street";
}

Layer layer_from_string(std::string_view text) {
  if (text == "Street") return Layer::Street;
  if (text == "RoofTop") return Layer::RoofTop;
  if (text == "Gateway") return Layer::Gateway;
  throw Error("unknown layer '" + std::string(text) + "'");
}

double distance(const Position& a, const Position& b) {
  return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
}

Link canonical(Link link) {
  if (link.b < link.a) {
    std::swap(link.a, link.b);
    std::swap(link.sector_a, link.sector_b);
  }
  return link;
}

namespace {

double normalize_degrees(double deg) {
  double r = std::fmod(deg, 360.0);
  if (r < 0.0) r += 360.0;
  if (r >= 360.0) r = 0.0;
  return r;
}

}  // namespace

int sector_index_for_azimuth(int sector_count, double sector_offset,
                             double azimuth_deg) {
  if (sector_count < 1) throw Error("sector_count must be positive");
  const double rel = normalize_degrees(azimuth_deg - sector_offset);
  const double width = 360.0 / sector_count;
  auto index = static_cast<int>(std::floor(rel / width));
  return std::clamp(index, 0, sector_count - 1);
}

SectorId sector_of(const Node& node, const Position& toward) {
  const double dx = toward.x - node.position.x;
  const double dy = toward.y - node.position.y;
  if (dx == 0.0 && dy == 0.0) {
    throw DegenerateGeometry("node " + node.id.value +
                             ": target separated only vertically, no azimuth");
  }
  const double az = std::atan2(dy, dx) * 180.0 / std::numbers::pi;
  return {node.id, sector_index_for_azimuth(node.sector_count, node.sector_offset, az)};
}

Link make_link(const Node& a, const Node& b) {
  Link link{a.id, b.id, sector_of(a, b.position), sector_of(b, a.position),
            distance(a.position, b.position)};
  return canonical(std::move(link));
}

Topology::Topology(std::vector<Node> nodes, std::vector<Link> links)
    : nodes_(std::move(nodes)) {
  std::stable_sort(nodes_.begin(), nodes_.end(),
                   [](const Node& l, const Node& r) { return l.id < r.id; });
  links_.reserve(links.size());
  for (auto& l : links) links_.push_back(canonical(std::move(l)));
  std::stable_sort(links_.begin(), links_.end(), [](const Link& l, const Link& r) {
    if (l.a != r.a) return l.a < r.a;
    return l.b < r.b;
  });

  incident_.assign(nodes_.size(), {});
  ends_.reserve(links_.size());
  for (LinkIndex i = 0; i < links_.size(); ++i) {
    const NodeIndex a = find(links_[i].a).value_or(kNoNode);
    const NodeIndex b = find(links_[i].b).value_or(kNoNode);
    ends_.emplace_back(a, b);
    if (a != kNoNode && b != kNoNode && a != b) {
      incident_[a].push_back(i);
      incident_[b].push_back(i);
    }
  }
}

std::optional<NodeIndex> Topology::find(const NodeId& id) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                             [](const Node& n, const NodeId& v) { return n.id < v; });
  if (it == nodes_.end() || it->id != id) return std::nullopt;
  return static_cast<NodeIndex>(it - nodes_.begin());
}

NodeIndex Topology::index_of(const NodeId& id) const {
  if (auto i = find(id)) return *i;
  throw Error("unknown node '" + id.value + "'");
}

NodeIndex Topology::other_end(LinkIndex i, NodeIndex from) const {
  const auto& [a, b] = ends_.at(i);
  return from == a ? b : a;
}

int Topology::sector_at(LinkIndex i, NodeIndex end) const {
  return end == ends_.at(i).first ? links_[i].sector_a.index : links_[i].sector_b.index;
}

std::optional<LinkIndex> Topology::find_link(NodeIndex u, NodeIndex v) const {
  if (u >= nodes_.size()) return std::nullopt;
  for (LinkIndex l : incident_[u]) {
    if (other_end(l, u) == v) return l;
  }
  return std::nullopt;
}

std::vector<NodeIndex> Topology::gateways() const {
  std::vector<NodeIndex> out;
  for (NodeIndex i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].is_gateway()) out.push_back(i);
  }
  return out;
}

DirectedLink Topology::directed(LinkIndex i, NodeIndex tx) const {
  return {tx, other_end(i, tx), i};
}

std::string describe(const Topology& topology, LinkIndex link) {
  const auto& l = topology.link(link);
  return "link " + l.a.value + "-" + l.b.value;
}

std::vector<Violation> validate(const Topology& topology) {
  std::vector<Violation> out;
  const auto& nodes = topology.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    if (i > 0 && nodes[i - 1].id == n.id) {
      out.push_back({"node " + n.id.value, "duplicate node id"});
    }
    if (n.sector_count < 1) {
      out.push_back({"node " + n.id.value, "sector_count must be >= 1"});
    }
  }

  const auto& links = topology.links();
  for (LinkIndex i = 0; i < links.size(); ++i) {
    const auto& l = links[i];
    const std::string name = describe(topology, i);
    if (i > 0 && links[i - 1].a == l.a && links[i - 1].b == l.b) {
      out.push_back({name, "duplicate link for node pair"});
      continue;
    }
    if (l.a == l.b) {
      out.push_back({name, "self loop"});
      continue;
    }
    const NodeIndex a = topology.end_a(i);
    const NodeIndex b = topology.end_b(i);
    if (a == kNoNode || b == kNoNode) {
      out.push_back({name, "references unknown node"});
      continue;
    }
    auto check_sector = [&](const SectorId& s, const Node& self, const Node& peer) {
      if (s.node != self.id) {
        out.push_back({name, "sector of " + self.id.value + " names node " + s.node.value});
        return;
      }
      if (self.sector_count < 1 || s.index < 0 || s.index >= self.sector_count) {
        out.push_back({name, "sector index " + std::to_string(s.index) +
                                 " out of range for " + self.id.value});
        return;
      }
      const double dx = peer.position.x - self.position.x;
      const double dy = peer.position.y - self.position.y;
      if (dx == 0.0 && dy == 0.0) return;  // no geometry to check against
      if (sector_of(self, peer.position).index != s.index) {
        out.push_back({name, "sector " + std::to_string(s.index) + " of " +
                                 self.id.value + " does not face " + peer.id.value});
      }
    };
    check_sector(l.sector_a, topology.node(a), topology.node(b));
    check_sector(l.sector_b, topology.node(b), topology.node(a));
    if (!(l.length >= 0.0)) out.push_back({name, "negative length"});
  }
  return out;
}

void require_valid(const Topology& topology) {
  const auto violations = validate(topology);
  if (violations.empty()) return;
  std::ostringstream msg;
  msg << "invalid topology:";
  for (const auto& v : violations) msg << " [" << v.entity << ": " << v.message << "]";
  throw Error(msg.str());
}

}  // namespace meshplan
