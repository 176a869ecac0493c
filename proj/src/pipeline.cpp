#include "meshplan/pipeline.hpp"

#include <algorithm>

namespace meshplan {

std::string Strategy::name() const {
  return std::string(bipartite ? "B" : "F") + (sector_fill ? "A" : "S");
}

Strategy Strategy::parse(std::string_view name) {
  if (name == "BS") return {true, false};
  if (name == "BA") return {true, true};
  if (name == "FS") return {false, false};
  if (name == "FA") return {false, true};
  throw Error("unknown strategy '" + std::string(name) + "' (expected BS, BA, FS or FA)");
}

std::vector<Strategy> Strategy::all() {
  return {{true, false}, {true, true}, {false, false}, {false, true}};
}

void check_pipeline_config(const PipelineConfig& config) {
  if (config.tss_threshold < 2) throw Error("tss_threshold must be >= 2");
  if (config.max_feedback_rounds < 0) throw Error("max_feedback_rounds must be >= 0");
  if (config.selection.k < 1) throw Error("selection k must be >= 1");
  check_anneal_config(config.anneal);
}

namespace {

struct Phases {
  ActiveTopology active;
  RoutingConfig routing;
  TransmissionSetCollection tss;
};

Phases route_and_build(ActiveTopology active, const PipelineConfig& config,
                       const Demands* demands) {
  Phases p;
  p.active = std::move(active);
  p.routing = compute_mdst(p.active, demands, config.routing);
  const auto w = schedule_weights(p.active, p.routing);
  TsgenOptions opts;
  opts.per_node_sector_fill = config.strategy.sector_fill;
  opts.threshold = config.tss_threshold;
  p.tss = build_transmission_sets(p.active, w, opts);
  return p;
}

OptimizeResult optimize(const Phases& p, const PipelineConfig& config) {
  return optimize_schedule(p.tss, primary_paths(p.active.topology(), p.routing), config.anneal,
                           config.optimize);
}

std::vector<NodeIndex> newly_lost(const ActiveTopology& before, const ActiveTopology& after) {
  std::vector<NodeIndex> lost;
  std::set_difference(after.unconnected.begin(), after.unconnected.end(),
                      before.unconnected.begin(), before.unconnected.end(),
                      std::back_inserter(lost));
  return lost;
}

}  // namespace

NetworkConfiguration run_pipeline(std::shared_ptr<const Topology> topology,
                                  const PipelineConfig& config, const Demands* demands) {
  check_pipeline_config(config);
  require_valid(*topology);
  const Topology& t = *topology;

  SelectionConfig selection = config.selection;
  selection.bipartite = config.strategy.bipartite;
  const LinkWeights full_weights = weight_links(t, demands);

  NetworkConfiguration out;
  AvoidList avoid;
  Phases cur = route_and_build(select_active_links(topology, full_weights, selection, avoid),
                               config, demands);
  std::optional<OptimizeResult> cur_opt;
  if (config.diagnostics && cur.tss.size() > static_cast<std::size_t>(config.tss_threshold)) {
    cur_opt = optimize(cur, config);
  }

  while (cur.tss.size() > static_cast<std::size_t>(config.tss_threshold)) {
    if (out.feedback_rounds >= config.max_feedback_rounds) {
      out.warnings.push_back("feedback round limit reached; accepting " +
                             std::to_string(cur.tss.size()) + " transmission sets");
      break;
    }
    std::vector<LinkKey> additions;
    for (LinkIndex l : cur.tss.troublesome) {
      auto key = key_of(t.link(l));
      if (!avoid.contains(key)) additions.push_back(std::move(key));
    }

    // Links whose avoidance strands a previously connected node go back.
    std::size_t rolled_back = 0;
    std::optional<ActiveTopology> trial;
    while (!additions.empty()) {
      AvoidList trial_avoid = avoid;
      trial_avoid.insert(additions.begin(), additions.end());
      trial = select_active_links(topology, full_weights, selection, trial_avoid);
      const auto lost = newly_lost(cur.active, *trial);
      if (lost.empty()) break;
      const auto before = additions.size();
      std::erase_if(additions, [&](const LinkKey& k) {
        const NodeIndex a = t.index_of(k.a);
        const NodeIndex b = t.index_of(k.b);
        return std::binary_search(lost.begin(), lost.end(), a) ||
               std::binary_search(lost.begin(), lost.end(), b);
      });
      if (additions.size() == before) additions.clear();
      rolled_back += before - additions.size();
      trial.reset();
    }
    if (additions.empty() || !trial) {
      out.warnings.push_back("feedback cannot shorten the schedule without losing "
                             "connectivity; accepting " +
                             std::to_string(cur.tss.size()) + " transmission sets");
      break;
    }

    FeedbackRound diag;
    diag.round = out.feedback_rounds + 1;
    diag.avoid_added = additions.size();
    diag.rolled_back = rolled_back;
    diag.links_before = cur.active.size();
    diag.tss_before = cur.tss.size();
    if (cur_opt) diag.worst_before = cur_opt->objective.worst;

    avoid.insert(additions.begin(), additions.end());
    cur = route_and_build(std::move(*trial), config, demands);
    cur_opt.reset();
    if (config.diagnostics) {
      cur_opt = optimize(cur, config);
      diag.worst_after = cur_opt->objective.worst;
    }
    diag.links_after = cur.active.size();
    diag.tss_after = cur.tss.size();
    out.feedback.push_back(diag);
    ++out.feedback_rounds;
  }

  OptimizeResult final_opt = cur_opt ? std::move(*cur_opt) : optimize(cur, config);
  out.active = std::move(cur.active);
  out.routing = std::move(cur.routing);
  out.tss = std::move(cur.tss);
  out.schedule = std::move(final_opt.schedule);
  out.delays = std::move(final_opt.report);
  out.objective = final_opt.objective;
  out.exhaustive = final_opt.exhaustive;
  out.avoid_final = std::move(avoid);
  if (!out.active.unconnected.empty()) {
    out.warnings.push_back(std::to_string(out.active.unconnected.size()) +
                           " node(s) left unconnected");
  }
  return out;
}

std::vector<std::string> check_consistency(const NetworkConfiguration& c) {
  std::vector<std::string> problems;
  const Topology& t = c.active.topology();
  for (NodeIndex v = 0; v < c.routing.primary.size(); ++v) {
    const auto& p = c.routing.primary[v];
    if (!p) continue;
    for (std::size_t i = 0; i + 1 < p->nodes.size(); ++i) {
      const auto l = t.find_link(p->nodes[i], p->nodes[i + 1]);
      if (!l || !c.active.is_active(*l)) {
        problems.push_back("primary path of " + t.node(v).id.value + " uses inactive hop");
        break;
      }
    }
  }
  std::vector<bool> seen(2 * t.link_count(), false);
  for (const auto& set : c.tss.sets) {
    for (const auto& d : set.links) {
      if (!c.active.is_active(d.link)) problems.push_back("set schedules inactive " + describe(t, d.link));
      seen[direction_index(t, d)] = true;
    }
    if (auto why = check_set(t, set); !why.empty()) problems.push_back(why);
  }
  for (LinkIndex l : c.active.active_links) {
    if (!seen[2 * l] || !seen[2 * l + 1]) problems.push_back(describe(t, l) + " not covered both ways");
  }
  if (c.schedule.length() != c.tss.size()) problems.push_back("schedule length differs from |TSS|");
  auto sorted = c.schedule.order;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] != i) {
      problems.push_back("schedule order is not a permutation");
      break;
    }
  }
  return problems;
}

}  // namespace meshplan
