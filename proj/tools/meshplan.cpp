// meshplan: backhaul mesh planning pipeline (topology generation, link
// selection, MDST routing, transmission sets, schedule optimization).

#include <CLI11.hpp>

#include <cstdlib>
#include <sstream>
#include <iostream>
#include <optional>
#include <string>

#include "meshplan/commands.hpp"

using namespace meshplan;

namespace {

int fail(const std::string& message, const std::string& flag, int code) {
  Json err = {{"error", message}};
  if (!flag.empty()) err["flag"] = flag;
  std::cerr << err.dump() << '\n';
  return code;
}

void emit(const Json& j, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << dump(j);
  } else {
    write_json_file(out, j);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"meshplan: routing and link scheduling planner for mmW mesh backhaul"};
  app.require_subcommand(1);
  std::string out;

  GenArgs gen;
  std::string gen_config;
  std::optional<std::uint64_t> gen_seed;
  auto* c_gen = app.add_subcommand("gen", "Generate a random urban topology");
  c_gen->add_option("--config", gen_config, "Generator config JSON")->required();
  c_gen->add_option("--seed", gen_seed, "RNG seed (overrides the config)");
  c_gen->add_option("--out", out, "Output topology JSON (default stdout)");

  SelectArgs sel;
  std::string sel_topology, sel_avoid;
  auto* c_sel = app.add_subcommand("select", "Select the active link subset");
  c_sel->add_option("--topology", sel_topology, "Topology JSON")->required();
  c_sel->add_option("--k", sel.k, "Max active links per sector")->capture_default_str();
  c_sel->add_flag("--bipartite", sel.bipartite, "Keep the active graph bipartite");
  c_sel->add_option("--max-k-escalation", sel.max_k_escalation,
                    "Times k may grow to connect stragglers")
      ->capture_default_str();
  c_sel->add_option("--avoid", sel_avoid, "Avoid-list JSON (array of [a, b] pairs)");
  c_sel->add_option("--out", out, "Output active topology JSON (default stdout)");

  RouteArgs route;
  std::string route_active;
  std::optional<int> route_max_trees;
  auto* c_route = app.add_subcommand("route", "Compute MDST routing trees and primary paths");
  c_route->add_option("--active", route_active, "Active topology JSON")->required();
  c_route->add_option("--max-trees", route_max_trees, "Keep only the heaviest stems");
  c_route->add_option("--out", out, "Output routing JSON (default stdout)");

  TsgenArgs ts;
  std::string ts_active, ts_routing;
  auto* c_ts = app.add_subcommand("tsgen", "Build transmission sets");
  c_ts->add_option("--active", ts_active, "Active topology JSON")->required();
  c_ts->add_option("--routing", ts_routing, "Routing JSON")->required();
  c_ts->add_flag("--fill-sectors", ts.fill_sectors, "Fill every free sector of a node at once");
  c_ts->add_option("--threshold", ts.threshold, "Set count above which links are troublesome")
      ->capture_default_str();
  c_ts->add_option("--out", out, "Output transmission set JSON (default stdout)");

  ScheduleArgs sch;
  std::string sch_tss, sch_routing;
  std::optional<int> sch_steps;
  auto* c_sch = app.add_subcommand("schedule", "Optimize the cyclic slot ordering");
  c_sch->add_option("--tss", sch_tss, "Transmission set JSON (from tsgen)")->required();
  c_sch->add_option("--routing", sch_routing, "Routing JSON")->required();
  c_sch->add_option("--anneal-steps", sch_steps, "Annealing steps per restart");
  c_sch->add_option("--seed", sch.seed, "Annealing seed")->capture_default_str();
  c_sch->add_flag("--force-anneal", sch.force_anneal, "Anneal even for short schedules");
  c_sch->add_option("--out", out, "Output schedule JSON (default stdout)");

  PlanArgs plan;
  std::string plan_topology;
  auto* c_plan = app.add_subcommand("plan", "Run the full pipeline with feedback");
  c_plan->add_option("--topology", plan_topology, "Topology JSON")->required();
  c_plan->add_option("--strategy", plan.strategy, "BS, BA, FS or FA")->capture_default_str();
  c_plan->add_option("--k", plan.k, "Max active links per sector")->capture_default_str();
  c_plan->add_option("--threshold", plan.threshold, "Transmission set count threshold")
      ->capture_default_str();
  c_plan->add_option("--seed", plan.seed, "Annealing seed")->capture_default_str();
  c_plan->add_flag("--diagnostics", plan.diagnostics,
                   "Also optimize pre-feedback schedules for comparison");
  c_plan->add_option("--out", out, "Output network configuration JSON (default stdout)");

  std::string exp_spec, exp_config, exp_seeds, exp_strategies = "BS,BA,FS,FA", exp_out;
  std::optional<int> exp_k, exp_threshold;
  bool exp_diag = false;
  auto* c_exp = app.add_subcommand(
      "experiment", "Run a seeds x strategies grid and write metrics CSVs (resumable). "
                    "MESHPLAN_THREADS caps concurrency.");
  c_exp->add_option("--spec", exp_spec, "Batch spec JSON (generator, seeds, strategies, ...)");
  c_exp->add_option("--config", exp_config, "Generator config JSON (instead of --spec)");
  c_exp->add_option("--seeds", exp_seeds, "Seed list, e.g. 1-16 or 1,4,9");
  c_exp->add_option("--strategies", exp_strategies, "Comma separated strategies")
      ->capture_default_str();
  c_exp->add_option("--k", exp_k, "Max active links per sector");
  c_exp->add_option("--threshold", exp_threshold, "Transmission set count threshold");
  c_exp->add_flag("--diagnostics", exp_diag, "Record optimized delays before feedback");
  c_exp->add_option("--out", exp_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(e.what(), "", 2);
  }

  try {
    if (*c_gen) {
      gen.config = gen_config;
      gen.seed = gen_seed;
      emit(cmd_gen(gen), out);
    } else if (*c_sel) {
      sel.topology = sel_topology;
      if (!sel_avoid.empty()) sel.avoid = sel_avoid;
      emit(cmd_select(sel), out);
    } else if (*c_route) {
      route.active = route_active;
      route.max_trees = route_max_trees;
      emit(cmd_route(route), out);
    } else if (*c_ts) {
      ts.active = ts_active;
      ts.routing = ts_routing;
      emit(cmd_tsgen(ts), out);
    } else if (*c_sch) {
      sch.tss = sch_tss;
      sch.routing = sch_routing;
      sch.anneal_steps = sch_steps;
      emit(cmd_schedule(sch), out);
    } else if (*c_plan) {
      plan.topology = plan_topology;
      emit(cmd_plan(plan), out);
    } else if (*c_exp) {
      BatchSpec spec;
      if (!exp_spec.empty()) {
        const std::filesystem::path p(exp_spec);
        spec = batch_spec_from_json(read_json_file(p), p.parent_path());
      } else if (!exp_config.empty()) {
        spec.generator = generator_config_from_json(read_json_file(exp_config));
      } else {
        throw UsageError("--spec", "experiment needs --spec or --config");
      }
      if (!exp_seeds.empty()) spec.seeds = parse_seed_list(exp_seeds);
      if (exp_spec.empty() || c_exp->count("--strategies") > 0) {
        spec.strategies.clear();
        std::string item;
        std::istringstream in(exp_strategies);
        while (std::getline(in, item, ',')) {
          try {
            spec.strategies.push_back(Strategy::parse(item));
          } catch (const Error& e) {
            throw UsageError("--strategies", e.what());
          }
        }
      }
      if (exp_k) spec.pipeline.selection.k = *exp_k;
      if (exp_threshold) spec.pipeline.tss_threshold = *exp_threshold;
      if (exp_diag) spec.pipeline.diagnostics = true;
      if (!exp_out.empty()) spec.output_dir = exp_out;
      spec.threads = default_threads();
      const auto result = cmd_experiment(spec);
      std::cout << Json{{"runs", result.runs.size()},
                        {"computed", result.computed},
                        {"reused", result.reused},
                        {"failures", result.failures.size()}}
                       .dump()
                << '\n';
      if (!result.failures.empty()) return 3;
    }
  } catch (const UsageError& e) {
    return fail(e.what(), e.flag(), 2);
  } catch (const std::exception& e) {
    return fail(e.what(), "", 1);
  }
  return 0;
}
