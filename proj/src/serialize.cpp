#include "meshplan/serialize.hpp"

#include <fstream>
#include <sstream>

namespace meshplan {

namespace {

const std::string& id(const Topology& t, NodeIndex v) { return t.node(v).id.value; }

Json pair_json(const std::string& a, const std::string& b) { return Json::array({a, b}); }

Json link_pair(const Topology& t, LinkIndex l) {
  return pair_json(t.link(l).a.value, t.link(l).b.value);
}

LinkIndex link_from_pair(const Topology& t, const Json& j) {
  const NodeIndex a = t.index_of(NodeId{j.at(0).get<std::string>()});
  const NodeIndex b = t.index_of(NodeId{j.at(1).get<std::string>()});
  const auto l = t.find_link(a, b);
  if (!l) throw Error("no link " + id(t, a) + "-" + id(t, b) + " in topology");
  return *l;
}

template <typename T>
T get_or(const Json& j, const char* key, T fallback) {
  auto it = j.find(key);
  return it == j.end() || it->is_null() ? fallback : it->get<T>();
}

}  // namespace

Json to_json(const Topology& topology) {
  Json nodes = Json::array();
  for (const auto& n : topology.nodes()) {
    nodes.push_back({{"id", n.id.value},
                     {"x", n.position.x},
                     {"y", n.position.y},
                     {"z", n.position.z},
                     {"layer", std::string(to_string(n.layer))},
                     {"sector_count", n.sector_count},
                     {"sector_offset", n.sector_offset}});
  }
  Json links = Json::array();
  for (const auto& l : topology.links()) {
    links.push_back({{"a", l.a.value},
                     {"b", l.b.value},
                     {"sector_a", l.sector_a.index},
                     {"sector_b", l.sector_b.index},
                     {"length", l.length}});
  }
  return {{"nodes", nodes}, {"links", links}};
}

Topology topology_from_json(const Json& j) {
  std::vector<Node> nodes;
  for (const auto& jn : j.at("nodes")) {
    Node n;
    n.id = NodeId{jn.at("id").get<std::string>()};
    n.position = {get_or(jn, "x", 0.0), get_or(jn, "y", 0.0), get_or(jn, "z", 0.0)};
    n.layer = layer_from_string(get_or<std::string>(jn, "layer", "Street"));
    n.sector_count = get_or(jn, "sector_count", 4);
    n.sector_offset = get_or(jn, "sector_offset", 0.0);
    nodes.push_back(std::move(n));
  }
  std::vector<Link> links;
  auto lookup = [&](const NodeId& nid) -> const Node* {
    for (const auto& n : nodes) {
      if (n.id == nid) return &n;
    }
    return nullptr;
  };
  for (const auto& jl : j.at("links")) {
    Link l;
    l.a = NodeId{jl.at("a").get<std::string>()};
    l.b = NodeId{jl.at("b").get<std::string>()};
    const Node* na = lookup(l.a);
    const Node* nb = lookup(l.b);
    auto sector = [&](const char* key, const Node* self, const Node* peer, const NodeId& nid) {
      if (jl.contains(key)) return SectorId{nid, jl.at(key).get<int>()};
      if (!self || !peer) return SectorId{nid, 0};
      try {
        return sector_of(*self, peer->position);
      } catch (const DegenerateGeometry&) {
        return SectorId{nid, 0};
      }
    };
    l.sector_a = sector("sector_a", na, nb, l.a);
    l.sector_b = sector("sector_b", nb, na, l.b);
    if (jl.contains("length")) {
      l.length = jl.at("length").get<double>();
    } else if (na && nb) {
      l.length = distance(na->position, nb->position);
    }
    links.push_back(std::move(l));
  }
  return Topology(std::move(nodes), std::move(links));
}

Json to_json(const GeneratorConfig& config) {
  Json layers = Json::array();
  for (const auto& s : config.layers) {
    layers.push_back({{"layer", std::string(to_string(s.layer))},
                      {"grid_cell", s.grid_cell},
                      {"jitter", s.jitter},
                      {"height_range", {s.height_range[0], s.height_range[1]}},
                      {"area",
                       {{"x", s.area.x},
                        {"y", s.area.y},
                        {"width", s.area.width},
                        {"height", s.area.height}}}});
  }
  return {{"layers", layers},
          {"los",
           {{"max_range", config.los.max_range},
            {"range_decay", config.los.range_decay},
            {"height_bonus", config.los.height_bonus}}},
          {"seed", config.seed},
          {"sector_count", config.sector_count}};
}

GeneratorConfig generator_config_from_json(const Json& j) {
  GeneratorConfig c;
  for (const auto& jl : j.at("layers")) {
    LayerSpec s;
    s.layer = layer_from_string(jl.at("layer").get<std::string>());
    s.grid_cell = jl.at("grid_cell").get<double>();
    s.jitter = get_or(jl, "jitter", 0.0);
    if (jl.contains("height_range")) {
      s.height_range = {jl.at("height_range").at(0).get<double>(),
                        jl.at("height_range").at(1).get<double>()};
    }
    const auto& a = jl.at("area");
    s.area = {get_or(a, "x", 0.0), get_or(a, "y", 0.0), a.at("width").get<double>(),
              a.at("height").get<double>()};
    c.layers.push_back(s);
  }
  const auto& los = j.at("los");
  c.los.max_range = los.at("max_range").get<double>();
  c.los.range_decay = get_or(los, "range_decay", 2.0);
  c.los.height_bonus = get_or(los, "height_bonus", 0.0);
  c.seed = get_or<std::uint64_t>(j, "seed", 1);
  c.sector_count = get_or(j, "sector_count", 4);
  return c;
}

Json to_json(const ActiveTopology& active) {
  const Topology& t = active.topology();
  Json links = Json::array();
  for (LinkIndex l : active.active_links) links.push_back(link_pair(t, l));
  Json colors = nullptr;
  if (active.colors) {
    colors = Json::object();
    for (NodeIndex v = 0; v < t.node_count(); ++v) {
      if ((*active.colors)[v] >= 0) colors[id(t, v)] = (*active.colors)[v];
    }
  }
  Json unconnected = Json::array();
  for (NodeIndex v : active.unconnected) unconnected.push_back(id(t, v));
  Json avoid = Json::array();
  for (const auto& k : active.avoid) avoid.push_back(pair_json(k.a.value, k.b.value));
  return {{"topology", to_json(t)},   {"active_links", links}, {"colors", colors},
          {"unconnected", unconnected}, {"k_used", active.k_used}, {"avoid", avoid}};
}

ActiveTopology active_from_json(const Json& j) {
  ActiveTopology a;
  a.base = std::make_shared<const Topology>(topology_from_json(j.at("topology")));
  const Topology& t = *a.base;
  require_valid(t);
  for (const auto& p : j.at("active_links")) a.active_links.push_back(link_from_pair(t, p));
  if (j.contains("colors") && !j.at("colors").is_null()) {
    std::vector<int> colors(t.node_count(), -1);
    for (const auto& [nid, c] : j.at("colors").items()) colors[t.index_of(NodeId{nid})] = c.get<int>();
    a.colors = std::move(colors);
  }
  for (const auto& u : j.at("unconnected")) {
    a.unconnected.push_back(t.index_of(NodeId{u.get<std::string>()}));
  }
  std::sort(a.unconnected.begin(), a.unconnected.end());
  a.k_used = get_or(j, "k_used", 0);
  if (j.contains("avoid")) {
    for (const auto& p : j.at("avoid")) {
      a.avoid.insert(make_key(NodeId{p.at(0).get<std::string>()}, NodeId{p.at(1).get<std::string>()}));
    }
  }
  finalize_active(a);
  return a;
}

Json to_json(const RoutingConfig& routing, const Topology& t) {
  Json trees = Json::array();
  for (const auto& tree : routing.trees) {
    Json parent = Json::object();
    for (NodeIndex v = 0; v < tree.parent.size(); ++v) {
      if (tree.parent[v] != kNoNode) parent[id(t, v)] = id(t, tree.parent[v]);
    }
    trees.push_back({{"id", tree.id}, {"root", id(t, tree.root)}, {"parent", parent}});
  }
  Json primary = Json::object();
  for (NodeIndex v = 0; v < routing.primary.size(); ++v) {
    const auto& p = routing.primary[v];
    if (!p) continue;
    Json path = Json::array();
    for (NodeIndex u : p->nodes) path.push_back(id(t, u));
    primary[id(t, v)] = {{"tree", p->tree}, {"path", path}};
  }
  Json weights = Json::array();
  for (LinkIndex l = 0; l < routing.link_weights.size(); ++l) {
    if (routing.link_weights[l] == 0.0) continue;
    weights.push_back({{"a", t.link(l).a.value}, {"b", t.link(l).b.value},
                       {"weight", routing.link_weights[l]}});
  }
  Json stems = Json::object();
  for (NodeIndex v = 0; v < routing.stem_of.size(); ++v) {
    if (routing.stem_of[v] >= 0) stems[id(t, v)] = routing.stem_of[v];
  }
  Json excluded = Json::array();
  for (NodeIndex v : routing.excluded) excluded.push_back(id(t, v));
  return {{"trees", trees},     {"primary", primary}, {"link_weights", weights},
          {"stem_of", stems},   {"excluded", excluded}};
}

RoutingConfig routing_from_json(const Json& j, const Topology& t) {
  const std::size_t n = t.node_count();
  RoutingConfig r;
  for (const auto& jt : j.at("trees")) {
    SpanningTree tree;
    tree.id = jt.at("id").get<int>();
    tree.root = t.index_of(NodeId{jt.at("root").get<std::string>()});
    tree.parent.assign(n, kNoNode);
    tree.parent_link.assign(n, 0);
    for (const auto& [child, parent] : jt.at("parent").items()) {
      const NodeIndex c = t.index_of(NodeId{child});
      const NodeIndex p = t.index_of(NodeId{parent.get<std::string>()});
      const auto l = t.find_link(c, p);
      if (!l) throw Error("tree edge " + child + "-" + parent.get<std::string>() + " is not a link");
      tree.parent[c] = p;
      tree.parent_link[c] = *l;
    }
    r.trees.push_back(std::move(tree));
  }
  r.primary.assign(n, std::nullopt);
  for (const auto& [nid, jp] : j.at("primary").items()) {
    PrimaryPath p;
    p.tree = jp.at("tree").get<int>();
    for (const auto& u : jp.at("path")) p.nodes.push_back(t.index_of(NodeId{u.get<std::string>()}));
    r.primary[t.index_of(NodeId{nid})] = std::move(p);
  }
  r.link_weights.assign(t.link_count(), 0.0);
  if (j.contains("link_weights")) {
    for (const auto& jw : j.at("link_weights")) {
      const LinkIndex l = link_from_pair(t, Json::array({jw.at("a"), jw.at("b")}));
      r.link_weights[l] = jw.at("weight").get<double>();
    }
  }
  r.stem_of.assign(n, -1);
  if (j.contains("stem_of")) {
    for (const auto& [nid, s] : j.at("stem_of").items()) r.stem_of[t.index_of(NodeId{nid})] = s.get<int>();
  }
  if (j.contains("excluded")) {
    for (const auto& u : j.at("excluded")) r.excluded.push_back(t.index_of(NodeId{u.get<std::string>()}));
  }
  return r;
}

Json to_json(const TransmissionSetCollection& tss, const ActiveTopology& active, bool embed) {
  const Topology& t = active.topology();
  Json sets = Json::array();
  for (const auto& s : tss.sets) {
    Json links = Json::array();
    for (const auto& d : s.links) links.push_back(pair_json(id(t, d.tx), id(t, d.rx)));
    Json modes = Json::object();
    for (const auto& [v, m] : s.modes) modes[id(t, v)] = std::string(to_string(m));
    sets.push_back({{"links", links}, {"modes", modes}});
  }
  Json coverage = Json::array();
  for (const auto& c : tss.coverage) {
    coverage.push_back({{"a", t.link(c.link).a.value}, {"b", t.link(c.link).b.value},
                        {"forward", c.forward}, {"backward", c.backward}});
  }
  Json troublesome = Json::array();
  for (LinkIndex l : tss.troublesome) troublesome.push_back(link_pair(t, l));
  Json out = {{"sets", sets}, {"coverage", coverage}, {"troublesome", troublesome},
              {"size", tss.size()}};
  if (embed) out["active"] = to_json(active);
  return out;
}

TransmissionSetCollection tss_from_json(const Json& j, const Topology& t) {
  TransmissionSetCollection tss;
  for (const auto& js : j.at("sets")) {
    TransmissionSet s;
    for (const auto& p : js.at("links")) {
      const NodeIndex tx = t.index_of(NodeId{p.at(0).get<std::string>()});
      const NodeIndex rx = t.index_of(NodeId{p.at(1).get<std::string>()});
      const auto l = t.find_link(tx, rx);
      if (!l) throw Error("scheduled pair is not a link");
      s.links.push_back({tx, rx, *l});
    }
    std::sort(s.links.begin(), s.links.end());
    if (js.contains("modes")) {
      for (const auto& [nid, m] : js.at("modes").items()) {
        const auto text = m.get<std::string>();
        if (text != "TX" && text != "RX") throw Error("bad mode '" + text + "'");
        s.modes.emplace_back(t.index_of(NodeId{nid}), text == "TX" ? Mode::Tx : Mode::Rx);
      }
      std::sort(s.modes.begin(), s.modes.end());
    }
    tss.sets.push_back(std::move(s));
  }
  if (j.contains("coverage")) {
    for (const auto& jc : j.at("coverage")) {
      const LinkIndex l = link_from_pair(t, Json::array({jc.at("a"), jc.at("b")}));
      tss.coverage.push_back({l, jc.at("forward").get<int>(), jc.at("backward").get<int>()});
    }
  }
  if (j.contains("troublesome")) {
    for (const auto& p : j.at("troublesome")) tss.troublesome.push_back(link_from_pair(t, p));
    std::sort(tss.troublesome.begin(), tss.troublesome.end());
  }
  return tss;
}

Json to_json(const DelayReport& report, const Topology& t) {
  Json paths = Json::array();
  for (const auto& d : report.paths) {
    paths.push_back({{"node", id(t, d.node)},
                     {"direction", std::string(to_string(d.direction))},
                     {"tree", d.tree},
                     {"primary", d.primary},
                     {"hops", d.hops},
                     {"worst", d.worst},
                     {"best", d.best},
                     {"mean", d.mean}});
  }
  return {{"worst_case", report.worst_case}, {"mean", report.mean}, {"paths", paths}};
}

Json schedule_to_json(const Schedule& schedule, const Objective& objective, bool exhaustive,
                      const DelayReport& report, const Topology& t) {
  return {{"order", schedule.order},
          {"length", schedule.length()},
          {"objective", {{"worst", objective.worst}, {"sum", objective.sum}}},
          {"exhaustive", exhaustive},
          {"delays", to_json(report, t)}};
}

Json to_json(const AnnealConfig& c) {
  Json j = {{"cooling", c.cooling}, {"steps", c.steps}, {"restarts", c.restarts},
            {"seed", c.seed},       {"threads", c.threads}};
  j["initial_temperature"] = c.initial_temperature ? Json(*c.initial_temperature) : Json(nullptr);
  return j;
}

AnnealConfig anneal_from_json(const Json& j, AnnealConfig c) {
  if (j.contains("initial_temperature") && !j.at("initial_temperature").is_null()) {
    c.initial_temperature = j.at("initial_temperature").get<double>();
  }
  c.cooling = get_or(j, "cooling", c.cooling);
  c.steps = get_or(j, "steps", c.steps);
  c.restarts = get_or(j, "restarts", c.restarts);
  c.seed = get_or(j, "seed", c.seed);
  c.threads = get_or(j, "threads", c.threads);
  return c;
}

Json to_json(const PipelineConfig& c) {
  return {{"strategy", c.strategy.name()},
          {"selection",
           {{"k", c.selection.k},
            {"bipartite", c.strategy.bipartite},
            {"max_k_escalation", c.selection.max_k_escalation}}},
          {"max_trees", c.routing.max_trees ? Json(*c.routing.max_trees) : Json(nullptr)},
          {"tss_threshold", c.tss_threshold},
          {"max_feedback_rounds", c.max_feedback_rounds},
          {"brute_force_limit", c.optimize.brute_force_limit},
          {"anneal", to_json(c.anneal)},
          {"diagnostics", c.diagnostics}};
}

PipelineConfig pipeline_config_from_json(const Json& j, PipelineConfig c) {
  if (j.contains("strategy")) c.strategy = Strategy::parse(j.at("strategy").get<std::string>());
  if (j.contains("selection")) {
    const auto& s = j.at("selection");
    c.selection.k = get_or(s, "k", c.selection.k);
    c.selection.max_k_escalation = get_or(s, "max_k_escalation", c.selection.max_k_escalation);
  }
  if (j.contains("max_trees") && !j.at("max_trees").is_null()) {
    c.routing.max_trees = j.at("max_trees").get<int>();
  }
  c.tss_threshold = get_or(j, "tss_threshold", c.tss_threshold);
  c.max_feedback_rounds = get_or(j, "max_feedback_rounds", c.max_feedback_rounds);
  c.optimize.brute_force_limit = get_or(j, "brute_force_limit", c.optimize.brute_force_limit);
  if (j.contains("anneal")) c.anneal = anneal_from_json(j.at("anneal"), c.anneal);
  c.diagnostics = get_or(j, "diagnostics", c.diagnostics);
  return c;
}

namespace {

Json to_json(const FeedbackRound& f) {
  auto opt = [](const std::optional<int>& v) { return v ? Json(*v) : Json(nullptr); };
  return {{"round", f.round},
          {"avoid_added", f.avoid_added},
          {"rolled_back", f.rolled_back},
          {"links_before", f.links_before},
          {"links_after", f.links_after},
          {"tss_before", f.tss_before},
          {"tss_after", f.tss_after},
          {"worst_before", opt(f.worst_before)},
          {"worst_after", opt(f.worst_after)}};
}

FeedbackRound feedback_from_json(const Json& j) {
  FeedbackRound f;
  f.round = j.at("round").get<int>();
  f.avoid_added = j.at("avoid_added").get<std::size_t>();
  f.rolled_back = j.at("rolled_back").get<std::size_t>();
  f.links_before = j.at("links_before").get<std::size_t>();
  f.links_after = j.at("links_after").get<std::size_t>();
  f.tss_before = j.at("tss_before").get<std::size_t>();
  f.tss_after = j.at("tss_after").get<std::size_t>();
  if (!j.at("worst_before").is_null()) f.worst_before = j.at("worst_before").get<int>();
  if (!j.at("worst_after").is_null()) f.worst_after = j.at("worst_after").get<int>();
  return f;
}

}  // namespace

Json to_json(const NetworkConfiguration& c) {
  const Topology& t = c.active.topology();
  Json avoid = Json::array();
  for (const auto& k : c.avoid_final) avoid.push_back(pair_json(k.a.value, k.b.value));
  Json feedback = Json::array();
  for (const auto& f : c.feedback) feedback.push_back(to_json(f));
  return {{"active", to_json(c.active)},
          {"routing", to_json(c.routing, t)},
          {"tss", to_json(c.tss, c.active, false)},
          {"schedule", schedule_to_json(c.schedule, c.objective, c.exhaustive, c.delays, t)},
          {"feedback_rounds", c.feedback_rounds},
          {"avoid_final", avoid},
          {"feedback", feedback},
          {"warnings", c.warnings}};
}

Json to_json(const RunMetrics& m) {
  const auto& s = m.summary;
  auto opt = [](const std::optional<int>& v) { return v ? Json(*v) : Json(nullptr); };
  Json summary = {{"strategy", s.strategy},
                  {"seed", s.seed},
                  {"nodes", s.nodes},
                  {"candidate_links", s.candidate_links},
                  {"active_links", s.active_links},
                  {"selected_link_ratio", s.selected_link_ratio},
                  {"k_used", s.k_used},
                  {"unconnected", s.unconnected},
                  {"tss_size", s.tss_size},
                  {"worst_case", s.worst_case},
                  {"mean_primary", s.mean_primary},
                  {"avg_disjoint", s.avg_disjoint},
                  {"nodes_without_disjoint", s.nodes_without_disjoint},
                  {"avg_links_per_slot", s.avg_links_per_slot},
                  {"feedback_rounds", s.feedback_rounds},
                  {"avoid_size", s.avoid_size},
                  {"link_reduction", s.link_reduction},
                  {"worst_before", opt(s.worst_before)},
                  {"worst_after", opt(s.worst_after)},
                  {"exhaustive", s.exhaustive}};
  Json samples = Json::array();
  for (const auto& d : m.samples) {
    samples.push_back({d.node, std::string(to_string(d.direction)), d.primary, d.tree, d.hops,
                       d.worst, d.best});
  }
  Json feedback = Json::array();
  for (const auto& f : m.feedback) feedback.push_back(to_json(f));
  return {{"summary", summary},
          {"primary_up", m.primary_up},
          {"primary_down", m.primary_down},
          {"alternative_up", m.alternative_up},
          {"alternative_down", m.alternative_down},
          {"samples", samples},
          {"feedback", feedback}};
}

RunMetrics run_metrics_from_json(const Json& j) {
  RunMetrics m;
  const auto& js = j.at("summary");
  auto& s = m.summary;
  s.strategy = js.at("strategy").get<std::string>();
  s.seed = js.at("seed").get<std::uint64_t>();
  s.nodes = js.at("nodes").get<std::size_t>();
  s.candidate_links = js.at("candidate_links").get<std::size_t>();
  s.active_links = js.at("active_links").get<std::size_t>();
  s.selected_link_ratio = js.at("selected_link_ratio").get<double>();
  s.k_used = js.at("k_used").get<int>();
  s.unconnected = js.at("unconnected").get<std::size_t>();
  s.tss_size = js.at("tss_size").get<std::size_t>();
  s.worst_case = js.at("worst_case").get<int>();
  s.mean_primary = js.at("mean_primary").get<double>();
  s.avg_disjoint = js.at("avg_disjoint").get<double>();
  s.nodes_without_disjoint = js.at("nodes_without_disjoint").get<std::size_t>();
  s.avg_links_per_slot = js.at("avg_links_per_slot").get<double>();
  s.feedback_rounds = js.at("feedback_rounds").get<int>();
  s.avoid_size = js.at("avoid_size").get<std::size_t>();
  s.link_reduction = js.at("link_reduction").get<long>();
  if (!js.at("worst_before").is_null()) s.worst_before = js.at("worst_before").get<int>();
  if (!js.at("worst_after").is_null()) s.worst_after = js.at("worst_after").get<int>();
  s.exhaustive = js.at("exhaustive").get<bool>();
  m.primary_up = j.at("primary_up").get<std::vector<int>>();
  m.primary_down = j.at("primary_down").get<std::vector<int>>();
  m.alternative_up = j.at("alternative_up").get<std::vector<int>>();
  m.alternative_down = j.at("alternative_down").get<std::vector<int>>();
  for (const auto& d : j.at("samples")) {
    m.samples.push_back({s.strategy, s.seed, d.at(0).get<std::string>(),
                         d.at(1).get<std::string>() == "upstream" ? Direction::Upstream
                                                                  : Direction::Downstream,
                         d.at(2).get<bool>(), d.at(3).get<int>(), d.at(4).get<int>(),
                         d.at(5).get<int>(), d.at(6).get<int>()});
  }
  for (const auto& f : j.at("feedback")) m.feedback.push_back(feedback_from_json(f));
  return m;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

std::string dump(const Json& j) { return j.dump(1) + "\n"; }

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << dump(j);
}

}  // namespace meshplan
