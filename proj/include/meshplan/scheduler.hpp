#pragma once

// Cyclic link schedules: delay evaluation over an ordering of transmission
// sets and the ordering search (exhaustive for short schedules, shuffled
// simulated annealing otherwise).
//
// Slot mechanics: a packet injected at slot t0 may use its first hop in t0
// itself; every later hop needs a strictly later slot. Slot s carries the
// set at position s mod L of the ordering. Delay counts slots from t0
// through the last hop's slot inclusive.

#include <cstdint>
#include <optional>
#include <vector>

#include "meshplan/netmodel.hpp"
#include "meshplan/tsgen.hpp"

namespace meshplan {

struct Schedule {
  std::vector<std::size_t> order;  // permutation of set indices; position = slot

  std::size_t length() const { return order.size(); }
  static Schedule identity(std::size_t n);
};

enum class Direction { Upstream, Downstream };

std::string_view to_string(Direction d);

struct PathSpec {
  NodeIndex node = kNoNode;
  Direction direction = Direction::Upstream;
  int tree = 0;
  bool primary = true;
  std::vector<DirectedLink> hops;
};

struct PathDelay {
  NodeIndex node = kNoNode;
  Direction direction = Direction::Upstream;
  int tree = 0;
  bool primary = true;
  int hops = 0;
  int worst = 0;  // over every injection slot
  int best = 0;
  double mean = 0.0;
};

struct DelayReport {
  std::vector<PathDelay> paths;
  int worst_case = 0;  // max worst over primary paths, both directions
  double mean = 0.0;   // mean worst over primary paths
};

/// Lexicographic optimization target over primary paths: (max, sum).
struct Objective {
  int worst = 0;
  std::int64_t sum = 0;

  friend auto operator<=>(const Objective&, const Objective&) = default;
};

/// Primary paths of every routed node, upstream and downstream.
std::vector<PathSpec> primary_paths(const Topology& topology, const RoutingConfig& routing);

/// Every tree path of every routed node (non-primary ones flagged), both
/// directions.
std::vector<PathSpec> all_tree_paths(const Topology& topology, const RoutingConfig& routing);

/// Slot delay of one path for injection slot t0. Throws when a hop is never
/// scheduled.
int path_delay(const Schedule& schedule, const TransmissionSetCollection& tss,
               const std::vector<DirectedLink>& path, std::size_t t0);

/// Precomputes link-to-set membership for repeated evaluation of many
/// orderings over a fixed path collection.
class DelayEvaluator {
 public:
  DelayEvaluator(const TransmissionSetCollection& tss, std::vector<PathSpec> paths);

  Objective objective(const std::vector<std::size_t>& order) const;
  DelayReport report(const std::vector<std::size_t>& order) const;

  std::size_t set_count() const { return set_count_; }
  const std::vector<PathSpec>& paths() const { return paths_; }
  /// Upper bound on any path delay, used to scalarize the objective.
  int delay_bound() const { return delay_bound_; }

 private:
  void next_table(const std::vector<std::size_t>& order, std::vector<int>& next) const;
  int delay_from(const std::vector<int>& next, std::size_t path, std::size_t t0) const;

  std::size_t set_count_;
  std::vector<PathSpec> paths_;
  std::vector<std::vector<std::uint32_t>> hop_ids_;   // per path, compact link ids
  std::vector<std::vector<std::uint32_t>> members_;   // per set, compact link ids
  std::size_t link_ids_ = 0;
  int delay_bound_ = 1;
};

DelayReport worst_case_delay(const Schedule& schedule, const TransmissionSetCollection& tss,
                             const std::vector<PathSpec>& paths);

struct AnnealConfig {
  std::optional<double> initial_temperature;  // default: initial objective
  double cooling = 0.995;
  int steps = 2000;
  int restarts = 10;
  std::uint64_t seed = 1;
  int threads = 1;
};

void check_anneal_config(const AnnealConfig& config);

struct OptimizeOptions {
  std::size_t brute_force_limit = 8;
  bool force_anneal = false;
};

struct OptimizeResult {
  Schedule schedule;
  DelayReport report;
  Objective objective;
  bool exhaustive = false;
  std::uint64_t evaluations = 0;
};

/// Orders only the primary paths (PathSpec::primary) into the objective.
OptimizeResult optimize_schedule(const TransmissionSetCollection& tss,
                                 const std::vector<PathSpec>& paths,
                                 const AnnealConfig& config = {},
                                 const OptimizeOptions& options = {});

}  // namespace meshplan
