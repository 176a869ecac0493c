#pragma once

// Command implementations behind the `meshplan` executable. Each command is a
// thin adapter: load JSON artifacts, call the owning module, emit JSON.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "meshplan/metrics.hpp"
#include "meshplan/serialize.hpp"

namespace meshplan {

/// Bad command-line input; `flag` names the offending option.
class UsageError : public Error {
 public:
  UsageError(std::string flag, const std::string& message)
      : Error(message), flag_(std::move(flag)) {}
  const std::string& flag() const { return flag_; }

 private:
  std::string flag_;
};

struct GenArgs {
  std::filesystem::path config;
  std::optional<std::uint64_t> seed;
};
Json cmd_gen(const GenArgs& args);

struct SelectArgs {
  std::filesystem::path topology;
  int k = 2;
  bool bipartite = false;
  int max_k_escalation = 2;
  std::optional<std::filesystem::path> avoid;
};
Json cmd_select(const SelectArgs& args);

struct RouteArgs {
  std::filesystem::path active;
  std::optional<int> max_trees;
};
Json cmd_route(const RouteArgs& args);

struct TsgenArgs {
  std::filesystem::path active;
  std::filesystem::path routing;
  bool fill_sectors = false;
  int threshold = 8;
};
Json cmd_tsgen(const TsgenArgs& args);

struct ScheduleArgs {
  std::filesystem::path tss;
  std::filesystem::path routing;
  std::optional<int> anneal_steps;
  std::uint64_t seed = 1;
  bool force_anneal = false;
};
Json cmd_schedule(const ScheduleArgs& args);

struct PlanArgs {
  std::filesystem::path topology;
  std::string strategy = "FS";
  int k = 2;
  int threshold = 8;
  std::uint64_t seed = 1;
  bool diagnostics = false;
};
Json cmd_plan(const PlanArgs& args);

/// Generator config, seeds and strategies for one experiment grid.
struct BatchSpec {
  GeneratorConfig generator;
  std::vector<std::uint64_t> seeds;
  std::vector<Strategy> strategies;
  PipelineConfig pipeline;
  std::filesystem::path output_dir;
  int threads = 1;
};

void check_batch_spec(const BatchSpec& spec);
BatchSpec batch_spec_from_json(const Json& j, const std::filesystem::path& base_dir);

struct BatchResult {
  std::vector<RunMetrics> runs;  // strategy-major, then seed, in spec order
  std::vector<std::pair<std::string, std::string>> failures;  // run name, message
  std::size_t computed = 0;
  std::size_t reused = 0;
};

/// Writes runs.csv, delays.csv, dist.csv, runtimes.csv and one directory per
/// run (config.json, metrics.json, runtime.json). Runs whose metrics.json is
/// already present are loaded instead of recomputed.
BatchResult cmd_experiment(const BatchSpec& spec);

/// "1-16" or "1,2,5" (ranges and lists may mix).
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

/// Thread cap from MESHPLAN_THREADS, else hardware concurrency.
int default_threads();

}  // namespace meshplan
