#include "meshplan/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

namespace meshplan {

RunMetrics collect_metrics(const NetworkConfiguration& c, const Topology& topology,
                           double runtime_s, const std::string& strategy, std::uint64_t seed,
                           const MetricsOptions& options) {
  RunMetrics m;
  m.runtime_s = runtime_s;
  auto& s = m.summary;
  s.strategy = strategy;
  s.seed = seed;
  s.nodes = topology.node_count();
  s.candidate_links = topology.link_count();
  s.active_links = c.active.size();
  s.selected_link_ratio =
      s.candidate_links ? static_cast<double>(s.active_links) / static_cast<double>(s.candidate_links)
                        : 0.0;
  s.k_used = c.active.k_used;
  s.unconnected = c.active.unconnected.size();
  s.tss_size = c.tss.size();
  s.worst_case = c.delays.worst_case;
  s.mean_primary = c.delays.mean;

  const auto dj = disjointness(c.routing);
  s.avg_disjoint = dj.mean;
  s.nodes_without_disjoint = dj.below_two.size();

  std::size_t slot_links = 0;
  for (const auto& set : c.tss.sets) slot_links += set.size();
  s.avg_links_per_slot =
      c.tss.size() ? static_cast<double>(slot_links) / static_cast<double>(c.tss.size()) : 0.0;

  s.feedback_rounds = c.feedback_rounds;
  s.avoid_size = c.avoid_final.size();
  s.exhaustive = c.exhaustive;
  if (!c.feedback.empty()) {
    s.link_reduction = static_cast<long>(c.feedback.front().links_before) -
                       static_cast<long>(c.feedback.back().links_after);
    s.worst_before = c.feedback.front().worst_before;
    s.worst_after = c.feedback.back().worst_after;
  }
  m.feedback = c.feedback;

  auto sample = [&](const PathDelay& d) {
    return DelaySample{strategy, seed, topology.node(d.node).id.value, d.direction,
                       d.primary, d.tree, d.hops, d.worst, d.best};
  };
  for (const auto& d : c.delays.paths) {
    if (!d.primary) continue;
    (d.direction == Direction::Upstream ? m.primary_up : m.primary_down).push_back(d.worst);
    m.samples.push_back(sample(d));
  }
  if (options.alternatives) {
    const auto all = worst_case_delay(c.schedule, c.tss, all_tree_paths(topology, c.routing));
    for (const auto& d : all.paths) {
      (d.direction == Direction::Upstream ? m.alternative_up : m.alternative_down)
          .push_back(d.worst);
      if (!d.primary) m.samples.push_back(sample(d));
    }
  }
  return m;
}

Quantiles quantiles(std::vector<double> v) {
  if (v.empty()) throw Error("quantiles of an empty sample");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  auto rank = [&](double p) {
    const auto r = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
    return v[std::clamp<std::size_t>(r, 1, n) - 1];
  };
  Quantiles q;
  q.min = v.front();
  q.max = v.back();
  q.q1 = rank(0.25);
  q.q3 = rank(0.75);
  q.median = n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
  q.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(n);
  return q;
}

namespace {

template <typename T>
std::vector<double> as_doubles(const std::vector<T>& xs) {
  return {xs.begin(), xs.end()};
}

void add_rows(std::vector<DistRow>& rows, const std::string& strategy, const std::string& metric,
              const std::vector<double>& values) {
  if (values.empty()) return;
  const Quantiles q = quantiles(values);
  const std::pair<const char*, double> stats[] = {{"min", q.min},       {"q1", q.q1},
                                                  {"median", q.median}, {"q3", q.q3},
                                                  {"max", q.max},       {"mean", q.mean}};
  for (const auto& [name, value] : stats) rows.push_back({strategy, metric, name, value});
}

}  // namespace

std::vector<DistRow> aggregate(const std::vector<RunMetrics>& batch) {
  if (batch.empty()) throw Error("aggregate of an empty batch");
  std::map<std::string, std::vector<const RunMetrics*>> groups;
  for (const auto& m : batch) groups[m.summary.strategy].push_back(&m);

  std::vector<DistRow> rows;
  for (const auto& [strategy, runs] : groups) {
    auto scalar = [&](const std::string& metric, auto get) {
      std::vector<double> values;
      for (const auto* r : runs) values.push_back(static_cast<double>(get(r->summary)));
      add_rows(rows, strategy, metric, values);
    };
    scalar("selected_link_ratio", [](const RunSummary& s) { return s.selected_link_ratio; });
    scalar("tss_size", [](const RunSummary& s) { return s.tss_size; });
    scalar("worst_case", [](const RunSummary& s) { return s.worst_case; });
    scalar("mean_primary", [](const RunSummary& s) { return s.mean_primary; });
    scalar("avg_disjoint", [](const RunSummary& s) { return s.avg_disjoint; });
    scalar("nodes_without_disjoint", [](const RunSummary& s) { return s.nodes_without_disjoint; });
    scalar("avg_links_per_slot", [](const RunSummary& s) { return s.avg_links_per_slot; });
    scalar("feedback_rounds", [](const RunSummary& s) { return s.feedback_rounds; });
    scalar("avoid_size", [](const RunSummary& s) { return s.avoid_size; });
    scalar("link_reduction", [](const RunSummary& s) { return s.link_reduction; });

    auto pooled = [&](const std::string& metric, auto member) {
      std::vector<double> values;
      for (const auto* r : runs) {
        const auto& xs = r->*member;
        values.insert(values.end(), xs.begin(), xs.end());
      }
      add_rows(rows, strategy, metric, values);
    };
    pooled("primary_up", &RunMetrics::primary_up);
    pooled("primary_down", &RunMetrics::primary_down);
    pooled("alternative_up", &RunMetrics::alternative_up);
    pooled("alternative_down", &RunMetrics::alternative_down);
  }
  return rows;
}

double dist_value(const std::vector<DistRow>& rows, const std::string& strategy,
                  const std::string& metric, const std::string& statistic) {
  for (const auto& r : rows) {
    if (r.strategy == strategy && r.metric == metric && r.statistic == statistic) return r.value;
  }
  throw Error("no " + statistic + " of " + metric + " for " + strategy);
}

std::string format_number(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw Error("number formatting failed");
  return std::string(buf, end);
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) throw Error("bad number '" + s + "'");
  return v;
}

template <typename Int>
Int parse_int(const std::string& s) {
  Int v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) throw Error("bad integer '" + s + "'");
  return v;
}

std::string opt(const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); }

std::optional<int> parse_opt(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return parse_int<int>(s);
}

constexpr const char* kRunsHeader =
    "strategy,seed,nodes,candidate_links,active_links,selected_link_ratio,k_used,unconnected,"
    "tss_size,worst_case,mean_primary,avg_disjoint,nodes_without_disjoint,avg_links_per_slot,"
    "feedback_rounds,avoid_size,link_reduction,worst_before,worst_after,exhaustive";

constexpr const char* kDistHeader = "strategy,metric,statistic,value";

void expect_header(std::istream& in, const char* header) {
  std::string line;
  if (!std::getline(in, line) || line != header) throw Error("unexpected CSV header");
}

}  // namespace

void write_runs_csv(std::ostream& out, const std::vector<RunSummary>& runs) {
  out << kRunsHeader << '\n';
  for (const auto& r : runs) {
    out << r.strategy << ',' << r.seed << ',' << r.nodes << ',' << r.candidate_links << ','
        << r.active_links << ',' << format_number(r.selected_link_ratio) << ',' << r.k_used << ','
        << r.unconnected << ',' << r.tss_size << ',' << r.worst_case << ','
        << format_number(r.mean_primary) << ',' << format_number(r.avg_disjoint) << ','
        << r.nodes_without_disjoint << ',' << format_number(r.avg_links_per_slot) << ','
        << r.feedback_rounds << ',' << r.avoid_size << ',' << r.link_reduction << ','
        << opt(r.worst_before) << ',' << opt(r.worst_after) << ',' << (r.exhaustive ? 1 : 0)
        << '\n';
  }
}

std::vector<RunSummary> read_runs_csv(std::istream& in) {
  expect_header(in, kRunsHeader);
  std::vector<RunSummary> runs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 20) throw Error("runs.csv row has " + std::to_string(f.size()) + " fields");
    RunSummary r;
    r.strategy = f[0];
    r.seed = parse_int<std::uint64_t>(f[1]);
    r.nodes = parse_int<std::size_t>(f[2]);
    r.candidate_links = parse_int<std::size_t>(f[3]);
    r.active_links = parse_int<std::size_t>(f[4]);
    r.selected_link_ratio = parse_double(f[5]);
    r.k_used = parse_int<int>(f[6]);
    r.unconnected = parse_int<std::size_t>(f[7]);
    r.tss_size = parse_int<std::size_t>(f[8]);
    r.worst_case = parse_int<int>(f[9]);
    r.mean_primary = parse_double(f[10]);
    r.avg_disjoint = parse_double(f[11]);
    r.nodes_without_disjoint = parse_int<std::size_t>(f[12]);
    r.avg_links_per_slot = parse_double(f[13]);
    r.feedback_rounds = parse_int<int>(f[14]);
    r.avoid_size = parse_int<std::size_t>(f[15]);
    r.link_reduction = parse_int<long>(f[16]);
    r.worst_before = parse_opt(f[17]);
    r.worst_after = parse_opt(f[18]);
    r.exhaustive = f[19] == "1";
    runs.push_back(std::move(r));
  }
  return runs;
}

void write_delays_csv(std::ostream& out, const std::vector<DelaySample>& samples) {
  out << "strategy,seed,node,direction,kind,tree,hops,worst,best\n";
  for (const auto& s : samples) {
    out << s.strategy << ',' << s.seed << ',' << s.node << ',' << to_string(s.direction) << ','
        << (s.primary ? "primary" : "alternative") << ',' << s.tree << ',' << s.hops << ','
        << s.worst << ',' << s.best << '\n';
  }
}

void write_dist_csv(std::ostream& out, const std::vector<DistRow>& rows) {
  out << kDistHeader << '\n';
  for (const auto& r : rows) {
    out << r.strategy << ',' << r.metric << ',' << r.statistic << ',' << format_number(r.value)
        << '\n';
  }
}

std::vector<DistRow> read_dist_csv(std::istream& in) {
  expect_header(in, kDistHeader);
  std::vector<DistRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 4) throw Error("dist.csv row has " + std::to_string(f.size()) + " fields");
    rows.push_back({f[0], f[1], f[2], parse_double(f[3])});
  }
  return rows;
}

}  // namespace meshplan
