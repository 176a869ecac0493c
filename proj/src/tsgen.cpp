#include "meshplan/tsgen.hpp"

#include <algorithm>
#include <map>
#include <optional>

namespace meshplan {

std::string_view to_string(Mode mode) { return mode == Mode::Tx ? "TX" : "RX"; }

bool TransmissionSet::contains(const DirectedLink& d) const {
  return std::binary_search(links.begin(), links.end(), d);
}

std::size_t direction_index(const Topology& topology, const DirectedLink& d) {
  return 2 * static_cast<std::size_t>(d.link) + (d.tx == topology.end_a(d.link) ? 0 : 1);
}

namespace {

DirectedLink hop(const Topology& t, NodeIndex from, NodeIndex to) {
  const auto l = t.find_link(from, to);
  if (!l) throw Error("path hop " + t.node(from).id.value + "->" + t.node(to).id.value +
                      " is not a link");
  return {from, to, *l};
}

}  // namespace

std::vector<DirectedLink> upstream_hops(const Topology& topology,
                                        const std::vector<NodeIndex>& path) {
  std::vector<DirectedLink> hops;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) hops.push_back(hop(topology, path[i], path[i + 1]));
  return hops;
}

std::vector<DirectedLink> downstream_hops(const Topology& topology,
                                          const std::vector<NodeIndex>& path) {
  std::vector<DirectedLink> hops;
  for (std::size_t i = path.size(); i-- > 1;) hops.push_back(hop(topology, path[i], path[i - 1]));
  return hops;
}

std::vector<double> schedule_weights(const ActiveTopology& active,
                                     const RoutingConfig& routing) {
  const Topology& t = active.topology();
  std::vector<double> w(2 * t.link_count(), 0.0);
  for (const auto& p : routing.primary) {
    if (!p) continue;
    for (const auto& d : upstream_hops(t, p->nodes)) w[direction_index(t, d)] += 1.0;
    for (const auto& d : downstream_hops(t, p->nodes)) w[direction_index(t, d)] += 1.0;
  }
  return w;
}

namespace {

class RoundBuilder {
 public:
  RoundBuilder(const Topology& t, const std::vector<std::vector<DirectedLink>>& by_node)
      : t_(t), by_node_(by_node), mode_(t.node_count()), busy_(t.node_count()) {
    for (NodeIndex v = 0; v < t.node_count(); ++v) {
      busy_[v].assign(static_cast<std::size_t>(t.node(v).sector_count), false);
    }
  }

  bool addable(const DirectedLink& d) const {
    if (busy_[d.tx][sector(d.link, d.tx)] || busy_[d.rx][sector(d.link, d.rx)]) return false;
    if (mode_[d.tx] == Mode::Rx || mode_[d.rx] == Mode::Tx) return false;
    return true;
  }

  // Adds the link; returns the nodes whose mode it defined.
  std::vector<NodeIndex> add(const DirectedLink& d) {
    std::vector<NodeIndex> fresh;
    if (!mode_[d.tx]) {
      mode_[d.tx] = Mode::Tx;
      fresh.push_back(d.tx);
    }
    if (!mode_[d.rx]) {
      mode_[d.rx] = Mode::Rx;
      fresh.push_back(d.rx);
    }
    busy_[d.tx][sector(d.link, d.tx)] = true;
    busy_[d.rx][sector(d.link, d.rx)] = true;
    links_.push_back(d);
    return fresh;
  }

  // One compatible link for every idle sector of `node`, best candidate first.
  template <typename Better>
  void fill_sectors(NodeIndex node, Better better) {
    const int sectors = t_.node(node).sector_count;
    for (int s = 0; s < sectors; ++s) {
      if (busy_[node][static_cast<std::size_t>(s)]) continue;
      std::optional<DirectedLink> pick;
      for (const DirectedLink& d : by_node_[node]) {
        const bool outward = d.tx == node;
        if (outward != (mode_[node] == Mode::Tx)) continue;
        if (sector(d.link, node) != static_cast<std::size_t>(s) || !addable(d)) continue;
        if (!pick || better(d, *pick)) pick = d;
      }
      if (pick) add(*pick);
    }
  }

  TransmissionSet finish() {
    TransmissionSet set;
    set.links = std::move(links_);
    std::sort(set.links.begin(), set.links.end());
    for (NodeIndex v = 0; v < mode_.size(); ++v) {
      if (mode_[v]) set.modes.emplace_back(v, *mode_[v]);
    }
    return set;
  }

 private:
  std::size_t sector(LinkIndex l, NodeIndex v) const {
    return static_cast<std::size_t>(t_.sector_at(l, v));
  }

  const Topology& t_;
  const std::vector<std::vector<DirectedLink>>& by_node_;
  std::vector<std::optional<Mode>> mode_;
  std::vector<std::vector<bool>> busy_;
  std::vector<DirectedLink> links_;
};

}  // namespace

TransmissionSetCollection build_transmission_sets(const ActiveTopology& active,
                                                  const std::vector<double>& weights,
                                                  const TsgenOptions& options) {
  const Topology& t = active.topology();
  if (active.active_links.empty()) throw Error("active topology has no links");
  if (weights.size() != 2 * t.link_count()) throw Error("directed weight size mismatch");

  std::vector<DirectedLink> order;
  std::vector<std::vector<DirectedLink>> by_node(t.node_count());
  for (LinkIndex l : active.active_links) {
    for (NodeIndex tx : {t.end_a(l), t.end_b(l)}) {
      const DirectedLink d = t.directed(l, tx);
      order.push_back(d);
      by_node[d.tx].push_back(d);
      by_node[d.rx].push_back(d);
    }
  }
  auto weight = [&](const DirectedLink& d) { return weights[direction_index(t, d)]; };
  auto heavier = [&](const DirectedLink& x, const DirectedLink& y) {
    if (weight(x) != weight(y)) return weight(x) > weight(y);
    return x < y;
  };
  std::sort(order.begin(), order.end(), heavier);

  std::vector<int> first_set(2 * t.link_count(), -1);
  auto covered = [&](const DirectedLink& d) { return first_set[direction_index(t, d)] >= 0; };
  // Fill candidates: uncovered directions first, then weight, then (tx, rx).
  auto fill_better = [&](const DirectedLink& x, const DirectedLink& y) {
    if (covered(x) != covered(y)) return !covered(x);
    return heavier(x, y);
  };

  TransmissionSetCollection out;
  std::size_t remaining = order.size();
  while (remaining > 0) {
    RoundBuilder round(t, by_node);
    auto take = [&](const DirectedLink& d) {
      const auto fresh = round.add(d);
      if (!options.per_node_sector_fill) return;
      for (NodeIndex v : fresh) round.fill_sectors(v, fill_better);
    };
    for (const auto& d : order) {
      if (!covered(d) && round.addable(d)) take(d);
    }
    for (const auto& d : order) {
      if (round.addable(d)) take(d);
    }
    TransmissionSet set = round.finish();
    const int index = static_cast<int>(out.sets.size());
    std::size_t newly = 0;
    for (const auto& d : set.links) {
      int& f = first_set[direction_index(t, d)];
      if (f < 0) {
        f = index;
        ++newly;
      }
    }
    if (newly == 0) throw Error("transmission set round made no progress");
    remaining -= newly;
    out.sets.push_back(std::move(set));
  }

  const int last = static_cast<int>(out.sets.size()) - 1;
  for (LinkIndex l : active.active_links) {
    const LinkCoverage c{l, first_set[2 * l], first_set[2 * l + 1]};
    out.coverage.push_back(c);
    if (static_cast<int>(out.sets.size()) > options.threshold &&
        (c.forward == last || c.backward == last)) {
      out.troublesome.push_back(l);
    }
  }
  return out;
}

std::string check_set(const Topology& t, const TransmissionSet& set) {
  std::map<std::pair<NodeIndex, int>, int> sector_use;
  std::map<NodeIndex, Mode> mode;
  for (const auto& d : set.links) {
    if (++sector_use[{d.tx, t.sector_at(d.link, d.tx)}] > 1 ||
        ++sector_use[{d.rx, t.sector_at(d.link, d.rx)}] > 1) {
      return "sector carries two links at " + describe(t, d.link);
    }
    auto [itx, _a] = mode.emplace(d.tx, Mode::Tx);
    auto [irx, _b] = mode.emplace(d.rx, Mode::Rx);
    if (itx->second != Mode::Tx || irx->second != Mode::Rx) {
      return "node mode conflict at " + describe(t, d.link);
    }
  }
  for (const auto& [v, m] : set.modes) {
    auto it = mode.find(v);
    if (it != mode.end() && it->second != m) return "recorded mode mismatch";
  }
  return {};
}

}  // namespace meshplan
