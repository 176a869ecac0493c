#include "meshplan/commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace meshplan {

namespace fs = std::filesystem;

Json cmd_gen(const GenArgs& args) {
  GeneratorConfig config = generator_config_from_json(read_json_file(args.config));
  if (args.seed) config.seed = *args.seed;
  return to_json(generate_topology(config));
}

namespace {

AvoidList read_avoid(const fs::path& path) {
  const Json j = read_json_file(path);
  const Json& list = j.is_object() ? j.at("avoid") : j;
  AvoidList avoid;
  for (const auto& p : list) {
    avoid.insert(make_key(NodeId{p.at(0).get<std::string>()}, NodeId{p.at(1).get<std::string>()}));
  }
  return avoid;
}

std::shared_ptr<const Topology> load_topology(const fs::path& path) {
  auto t = std::make_shared<const Topology>(topology_from_json(read_json_file(path)));
  require_valid(*t);
  return t;
}

}  // namespace

Json cmd_select(const SelectArgs& args) {
  if (args.k < 1) throw UsageError("--k", "--k must be >= 1");
  auto topology = load_topology(args.topology);
  const AvoidList avoid = args.avoid ? read_avoid(*args.avoid) : AvoidList{};
  const SelectionConfig config{args.k, args.bipartite, args.max_k_escalation};
  const auto active = select_active_links(topology, weight_links(*topology), config, avoid);
  return to_json(active);
}

Json cmd_route(const RouteArgs& args) {
  const ActiveTopology active = active_from_json(read_json_file(args.active));
  RoutingOptions options;
  options.max_trees = args.max_trees;
  return to_json(compute_mdst(active, nullptr, options), active.topology());
}

Json cmd_tsgen(const TsgenArgs& args) {
  const ActiveTopology active = active_from_json(read_json_file(args.active));
  const RoutingConfig routing = routing_from_json(read_json_file(args.routing), active.topology());
  if (args.threshold < 2) throw UsageError("--threshold", "--threshold must be >= 2");
  TsgenOptions options;
  options.per_node_sector_fill = args.fill_sectors;
  options.threshold = args.threshold;
  const auto tss =
      build_transmission_sets(active, schedule_weights(active, routing), options);
  return to_json(tss, active, true);
}

Json cmd_schedule(const ScheduleArgs& args) {
  const Json jt = read_json_file(args.tss);
  if (!jt.contains("active")) {
    throw UsageError("--tss", "transmission set file lacks the embedded active topology");
  }
  const ActiveTopology active = active_from_json(jt.at("active"));
  const Topology& t = active.topology();
  const auto tss = tss_from_json(jt, t);
  const auto routing = routing_from_json(read_json_file(args.routing), t);
  AnnealConfig anneal;
  anneal.seed = args.seed;
  if (args.anneal_steps) {
    if (*args.anneal_steps < 0) throw UsageError("--anneal-steps", "--anneal-steps must be >= 0");
    anneal.steps = *args.anneal_steps;
  }
  OptimizeOptions options;
  options.force_anneal = args.force_anneal;
  const auto result = optimize_schedule(tss, primary_paths(t, routing), anneal, options);
  return schedule_to_json(result.schedule, result.objective, result.exhaustive, result.report, t);
}

Json cmd_plan(const PlanArgs& args) {
  PipelineConfig config;
  try {
    config.strategy = Strategy::parse(args.strategy);
  } catch (const Error& e) {
    throw UsageError("--strategy", e.what());
  }
  if (args.k < 1) throw UsageError("--k", "--k must be >= 1");
  if (args.threshold < 2) throw UsageError("--threshold", "--threshold must be >= 2");
  config.selection.k = args.k;
  config.tss_threshold = args.threshold;
  config.anneal.seed = args.seed;
  config.diagnostics = args.diagnostics;
  auto topology = load_topology(args.topology);
  const auto result = run_pipeline(topology, config);
  Json j = to_json(result);
  j["pipeline"] = to_json(config);
  return j;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::istringstream in(text);
  std::string part;
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
      v = std::stoull(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty()) throw UsageError("--seeds", "bad seed '" + s + "'");
    return v;
  };
  while (std::getline(in, part, ',')) {
    const auto dash = part.find('-');
    if (dash == std::string::npos) {
      seeds.push_back(number(part));
      continue;
    }
    const auto lo = number(part.substr(0, dash));
    const auto hi = number(part.substr(dash + 1));
    if (hi < lo) throw UsageError("--seeds", "empty seed range '" + part + "'");
    for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
  }
  return seeds;
}

int default_threads() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MESHPLAN_THREADS")) {
    try {
      n = std::stoi(env);
    } catch (const std::exception&) {
      throw Error(std::string("MESHPLAN_THREADS is not a number: ") + env);
    }
  }
  return std::max(1, n);
}

void check_batch_spec(const BatchSpec& spec) {
  if (spec.seeds.empty()) throw Error("batch needs at least one seed");
  if (spec.strategies.empty()) throw Error("batch needs at least one strategy");
  if (spec.output_dir.empty()) throw Error("batch needs an output directory");
  check_config(spec.generator);
  check_pipeline_config(spec.pipeline);
}

BatchSpec batch_spec_from_json(const Json& j, const fs::path& base_dir) {
  BatchSpec spec;
  const Json& gen = j.at("generator");
  spec.generator = gen.is_string()
                       ? generator_config_from_json(read_json_file(base_dir / gen.get<std::string>()))
                       : generator_config_from_json(gen);
  const Json& seeds = j.at("seeds");
  spec.seeds = seeds.is_string() ? parse_seed_list(seeds.get<std::string>())
                                 : seeds.get<std::vector<std::uint64_t>>();
  for (const auto& s : j.at("strategies")) spec.strategies.push_back(Strategy::parse(s.get<std::string>()));
  if (j.contains("pipeline")) spec.pipeline = pipeline_config_from_json(j.at("pipeline"));
  if (j.contains("output_dir")) spec.output_dir = base_dir / j.at("output_dir").get<std::string>();
  if (j.contains("threads")) spec.threads = j.at("threads").get<int>();
  return spec;
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

}  // namespace

BatchResult cmd_experiment(const BatchSpec& spec) {
  check_batch_spec(spec);
  fs::create_directories(spec.output_dir / "runs");
  fs::create_directories(spec.output_dir / "topologies");

  std::map<std::uint64_t, std::shared_ptr<const Topology>> topologies;
  for (auto seed : spec.seeds) {
    if (topologies.contains(seed)) continue;
    GeneratorConfig g = spec.generator;
    g.seed = seed;
    auto t = std::make_shared<const Topology>(generate_topology(g));
    write_json_file(spec.output_dir / "topologies" / ("seed_" + std::to_string(seed) + ".json"),
                    to_json(*t));
    topologies.emplace(seed, std::move(t));
  }

  struct Item {
    Strategy strategy;
    std::uint64_t seed;
    std::string name;
  };
  std::vector<Item> items;
  for (const auto& s : spec.strategies) {
    for (auto seed : spec.seeds) {
      items.push_back({s, seed, s.name() + "_" + std::to_string(seed)});
    }
  }

  std::vector<std::optional<RunMetrics>> results(items.size());
  std::vector<std::optional<std::string>> errors(items.size());
  std::vector<bool> reused(items.size(), false);
  std::vector<double> runtimes(items.size(), 0.0);
  std::atomic<std::size_t> cursor{0};

  auto worker = [&] {
    for (std::size_t i = cursor++; i < items.size(); i = cursor++) {
      const Item& item = items[i];
      const fs::path dir = spec.output_dir / "runs" / item.name;
      const fs::path metrics_file = dir / "metrics.json";
      try {
        if (fs::exists(metrics_file)) {
          results[i] = run_metrics_from_json(read_json_file(metrics_file));
          if (fs::exists(dir / "runtime.json")) {
            runtimes[i] = read_json_file(dir / "runtime.json").at("runtime_s").get<double>();
          }
          reused[i] = true;
          continue;
        }
        fs::create_directories(dir);
        PipelineConfig config = spec.pipeline;
        config.strategy = item.strategy;
        config.anneal.seed = item.seed;
        const auto& topology = topologies.at(item.seed);
        const auto start = std::chrono::steady_clock::now();
        const auto configuration = run_pipeline(topology, config);
        const double runtime =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        auto metrics = collect_metrics(configuration, *topology, runtime, item.strategy.name(),
                                       item.seed);
        Json cj = to_json(configuration);
        cj["pipeline"] = to_json(config);
        write_json_file(dir / "config.json", cj);
        write_json_file(dir / "runtime.json", Json{{"runtime_s", runtime}});
        // metrics.json last: its presence marks the run complete.
        write_json_file(metrics_file, to_json(metrics));
        runtimes[i] = runtime;
        results[i] = std::move(metrics);
      } catch (const std::exception& e) {
        errors[i] = e.what();
        try {
          fs::create_directories(dir);
          write_json_file(dir / "error.json", Json{{"error", e.what()}});
        } catch (const std::exception&) {
        }
      }
    }
  };

  const int threads = std::clamp(spec.threads, 1, static_cast<int>(items.size()));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  }

  BatchResult out;
  std::vector<RunSummary> summaries;
  std::vector<DelaySample> samples;
  std::ostringstream runtime_csv;
  runtime_csv << "strategy,seed,runtime_s\n";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (errors[i]) {
      out.failures.emplace_back(items[i].name, *errors[i]);
      continue;
    }
    (reused[i] ? out.reused : out.computed) += 1;
    summaries.push_back(results[i]->summary);
    samples.insert(samples.end(), results[i]->samples.begin(), results[i]->samples.end());
    runtime_csv << items[i].strategy.name() << ',' << items[i].seed << ','
                << format_number(runtimes[i]) << '\n';
    out.runs.push_back(std::move(*results[i]));
  }

  std::ostringstream runs_csv, delays_csv, dist_csv;
  write_runs_csv(runs_csv, summaries);
  write_delays_csv(delays_csv, samples);
  if (!out.runs.empty()) write_dist_csv(dist_csv, aggregate(out.runs));
  write_text(spec.output_dir / "runs.csv", runs_csv.str());
  write_text(spec.output_dir / "delays.csv", delays_csv.str());
  write_text(spec.output_dir / "dist.csv", dist_csv.str());
  write_text(spec.output_dir / "runtimes.csv", runtime_csv.str());
  if (!out.failures.empty()) {
    std::ostringstream f;
    f << "run,error\n";
    for (const auto& [name, msg] : out.failures) f << name << ',' << '"' << msg << '"' << '\n';
    write_text(spec.output_dir / "failures.csv", f.str());
  }
  return out;
}

}  // namespace meshplan
