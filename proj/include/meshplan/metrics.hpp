#pragma once

// Per-run measurements and per-strategy distribution tables, with the CSV
// layouts used by the batch runner.
//
//   runs.csv    one row per run, scalar metrics (RunSummary columns)
//   delays.csv  one row per path delay sample
//   dist.csv    strategy,metric,statistic,value

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "meshplan/netmodel.hpp"
#include "meshplan/pipeline.hpp"

namespace meshplan {

struct RunSummary {
  std::string strategy;
  std::uint64_t seed = 0;
  std::size_t nodes = 0;
  std::size_t candidate_links = 0;
  std::size_t active_links = 0;
  double selected_link_ratio = 0.0;
  int k_used = 0;
  std::size_t unconnected = 0;
  std::size_t tss_size = 0;
  int worst_case = 0;
  double mean_primary = 0.0;
  double avg_disjoint = 0.0;
  std::size_t nodes_without_disjoint = 0;
  double avg_links_per_slot = 0.0;
  int feedback_rounds = 0;
  std::size_t avoid_size = 0;
  long link_reduction = 0;
  std::optional<int> worst_before;  // optimized worst case before the first feedback round
  std::optional<int> worst_after;   // ... and after the last one
  bool exhaustive = false;

  friend bool operator==(const RunSummary&, const RunSummary&) = default;
};

struct DelaySample {
  std::string strategy;
  std::uint64_t seed = 0;
  std::string node;
  Direction direction = Direction::Upstream;
  bool primary = true;
  int tree = 0;
  int hops = 0;
  int worst = 0;
  int best = 0;
};

struct RunMetrics {
  RunSummary summary;
  double runtime_s = 0.0;
  std::vector<int> primary_up;
  std::vector<int> primary_down;
  std::vector<int> alternative_up;    // every tree path, primaries included
  std::vector<int> alternative_down;
  std::vector<DelaySample> samples;
  std::vector<FeedbackRound> feedback;
};

struct MetricsOptions {
  bool alternatives = true;  // also evaluate every tree path on the final schedule
};

RunMetrics collect_metrics(const NetworkConfiguration& configuration, const Topology& topology,
                           double runtime_s, const std::string& strategy = {},
                           std::uint64_t seed = 0, const MetricsOptions& options = {});

struct Quantiles {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

/// Nearest-rank quartiles; the median averages the two middle values for
/// even sample counts. Throws on an empty sample.
Quantiles quantiles(std::vector<double> values);

struct DistRow {
  std::string strategy;
  std::string metric;
  std::string statistic;  // min, q1, median, q3, max, mean
  double value = 0.0;

  friend bool operator==(const DistRow&, const DistRow&) = default;
};

/// Per-strategy distributions of every scalar metric plus pooled path delay
/// samples (primary_up, primary_down, alternative_up, alternative_down).
std::vector<DistRow> aggregate(const std::vector<RunMetrics>& batch);

/// Quantile lookup in an aggregate table; throws when absent.
double dist_value(const std::vector<DistRow>& rows, const std::string& strategy,
                  const std::string& metric, const std::string& statistic);

std::string format_number(double value);

void write_runs_csv(std::ostream& out, const std::vector<RunSummary>& runs);
std::vector<RunSummary> read_runs_csv(std::istream& in);
void write_delays_csv(std::ostream& out, const std::vector<DelaySample>& samples);
void write_dist_csv(std::ostream& out, const std::vector<DistRow>& rows);
std::vector<DistRow> read_dist_csv(std::istream& in);

}  // namespace meshplan
