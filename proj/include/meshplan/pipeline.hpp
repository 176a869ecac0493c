#pragma once

// End-to-end planning run: select -> route -> transmission sets, with the
// feedback loop that pushes troublesome links into the avoid-list whenever
// the set count exceeds the threshold, then schedule optimization.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "meshplan/routing.hpp"
#include "meshplan/scheduler.hpp"
#include "meshplan/selection.hpp"
#include "meshplan/tsgen.hpp"

namespace meshplan {

struct Strategy {
  bool bipartite = false;
  bool sector_fill = false;

  std::string name() const;                    // BS, BA, FS or FA
  static Strategy parse(std::string_view name);  // throws Error on anything else
  static std::vector<Strategy> all();
  friend bool operator==(const Strategy&, const Strategy&) = default;
};

struct PipelineConfig {
  Strategy strategy;
  SelectionConfig selection;  // `bipartite` is taken from strategy
  RoutingOptions routing;
  int tss_threshold = 8;
  int max_feedback_rounds = 8;
  AnnealConfig anneal;
  OptimizeOptions optimize;
  bool diagnostics = false;  // also optimize every pre-feedback schedule
};

void check_pipeline_config(const PipelineConfig& config);

struct FeedbackRound {
  int round = 0;
  std::size_t avoid_added = 0;
  std::size_t rolled_back = 0;
  std::size_t links_before = 0;
  std::size_t links_after = 0;
  std::size_t tss_before = 0;
  std::size_t tss_after = 0;
  std::optional<int> worst_before;  // optimized, when diagnostics are on
  std::optional<int> worst_after;
};

struct NetworkConfiguration {
  ActiveTopology active;
  RoutingConfig routing;
  TransmissionSetCollection tss;
  Schedule schedule;
  DelayReport delays;  // primary paths, both directions
  Objective objective;
  bool exhaustive = false;
  int feedback_rounds = 0;
  AvoidList avoid_final;
  std::vector<FeedbackRound> feedback;
  std::vector<std::string> warnings;
};

NetworkConfiguration run_pipeline(std::shared_ptr<const Topology> topology,
                                  const PipelineConfig& config,
                                  const Demands* demands = nullptr);

/// Cross-artifact consistency; empty when the configuration is coherent.
std::vector<std::string> check_consistency(const NetworkConfiguration& config);

}  // namespace meshplan
