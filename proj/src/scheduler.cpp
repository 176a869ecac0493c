#include "meshplan/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <numeric>

#include "meshplan/random.hpp"

namespace meshplan {

Schedule Schedule::identity(std::size_t n) {
  Schedule s;
  s.order.resize(n);
  std::iota(s.order.begin(), s.order.end(), std::size_t{0});
  return s;
}

std::string_view to_string(Direction d) {
  return d == Direction::Upstream ? "upstream" : "downstream";
}

std::vector<PathSpec> primary_paths(const Topology& topology, const RoutingConfig& routing) {
  std::vector<PathSpec> out;
  for (NodeIndex v = 0; v < routing.primary.size(); ++v) {
    const auto& p = routing.primary[v];
    if (!p) continue;
    out.push_back({v, Direction::Upstream, p->tree, true, upstream_hops(topology, p->nodes)});
    out.push_back({v, Direction::Downstream, p->tree, true, downstream_hops(topology, p->nodes)});
  }
  return out;
}

std::vector<PathSpec> all_tree_paths(const Topology& topology, const RoutingConfig& routing) {
  std::vector<PathSpec> out;
  for (NodeIndex v = 0; v < routing.primary.size(); ++v) {
    const auto& p = routing.primary[v];
    if (!p) continue;
    for (const auto& tree : routing.trees) {
      const auto nodes = tree_path(tree, v);
      if (nodes.size() < 2) continue;
      const bool primary = tree.id == p->tree;
      out.push_back({v, Direction::Upstream, tree.id, primary, upstream_hops(topology, nodes)});
      out.push_back({v, Direction::Downstream, tree.id, primary, downstream_hops(topology, nodes)});
    }
  }
  return out;
}

int path_delay(const Schedule& schedule, const TransmissionSetCollection& tss,
               const std::vector<DirectedLink>& path, std::size_t t0) {
  const std::size_t L = schedule.length();
  if (L == 0) throw Error("empty schedule");
  if (t0 >= L) throw Error("injection slot out of range");
  if (path.empty()) return 0;
  for (std::size_t h = 0; h < path.size(); ++h) {
    const bool present = std::any_of(tss.sets.begin(), tss.sets.end(),
                                     [&](const TransmissionSet& s) { return s.contains(path[h]); });
    if (!present) {
      throw Error("hop " + std::to_string(h) + " (" + std::to_string(path[h].tx) + "->" +
                  std::to_string(path[h].rx) + ") is never scheduled");
    }
  }
  std::size_t slot = t0;
  for (std::size_t h = 0; h < path.size(); ++h) {
    if (h > 0) ++slot;
    while (!tss.sets.at(schedule.order[slot % L]).contains(path[h])) ++slot;
  }
  return static_cast<int>(slot - t0 + 1);
}

DelayEvaluator::DelayEvaluator(const TransmissionSetCollection& tss, std::vector<PathSpec> paths)
    : set_count_(tss.size()), paths_(std::move(paths)) {
  if (set_count_ == 0) throw Error("no transmission sets to schedule");
  std::map<DirectedLink, std::uint32_t> ids;
  std::size_t max_hops = 0;
  for (const auto& p : paths_) {
    std::vector<std::uint32_t> hop_ids;
    for (const auto& d : p.hops) {
      auto [it, _] = ids.emplace(d, static_cast<std::uint32_t>(ids.size()));
      hop_ids.push_back(it->second);
    }
    max_hops = std::max(max_hops, p.hops.size());
    hop_ids_.push_back(std::move(hop_ids));
  }
  link_ids_ = ids.size();
  members_.resize(set_count_);
  std::vector<bool> seen(link_ids_, false);
  for (std::size_t s = 0; s < set_count_; ++s) {
    for (const auto& d : tss.sets[s].links) {
      auto it = ids.find(d);
      if (it == ids.end()) continue;
      members_[s].push_back(it->second);
      seen[it->second] = true;
    }
  }
  for (const auto& [d, id] : ids) {
    if (!seen[id]) {
      throw Error("path hop " + std::to_string(d.tx) + "->" + std::to_string(d.rx) +
                  " is never scheduled");
    }
  }
  delay_bound_ = static_cast<int>(std::max<std::size_t>(1, set_count_ * max_hops));
}

void DelayEvaluator::next_table(const std::vector<std::size_t>& order,
                                std::vector<int>& next) const {
  const std::size_t L = set_count_;
  std::vector<char> has(link_ids_ * L, 0);
  for (std::size_t pos = 0; pos < L; ++pos) {
    for (std::uint32_t id : members_[order[pos]]) has[id * L + pos] = 1;
  }
  next.assign(link_ids_ * L, -1);
  for (std::size_t id = 0; id < link_ids_; ++id) {
    long last = -1;
    for (std::size_t q = 2 * L; q-- > 0;) {
      if (has[id * L + q % L]) last = static_cast<long>(q);
      if (q < L) next[id * L + q] = static_cast<int>(last - static_cast<long>(q));
    }
  }
}

int DelayEvaluator::delay_from(const std::vector<int>& next, std::size_t path,
                               std::size_t t0) const {
  const std::size_t L = set_count_;
  const auto& hops = hop_ids_[path];
  if (hops.empty()) return 0;
  std::size_t slot = t0 + static_cast<std::size_t>(next[hops[0] * L + t0]);
  for (std::size_t h = 1; h < hops.size(); ++h) {
    const std::size_t from = slot + 1;
    slot = from + static_cast<std::size_t>(next[hops[h] * L + from % L]);
  }
  return static_cast<int>(slot - t0 + 1);
}

Objective DelayEvaluator::objective(const std::vector<std::size_t>& order) const {
  std::vector<int> next;
  next_table(order, next);
  Objective obj;
  for (std::size_t p = 0; p < paths_.size(); ++p) {
    if (!paths_[p].primary) continue;
    int worst = 0;
    for (std::size_t t0 = 0; t0 < set_count_; ++t0) worst = std::max(worst, delay_from(next, p, t0));
    obj.worst = std::max(obj.worst, worst);
    obj.sum += worst;
  }
  return obj;
}

DelayReport DelayEvaluator::report(const std::vector<std::size_t>& order) const {
  std::vector<int> next;
  next_table(order, next);
  DelayReport r;
  std::int64_t sum = 0;
  std::size_t primaries = 0;
  for (std::size_t p = 0; p < paths_.size(); ++p) {
    const auto& spec = paths_[p];
    PathDelay d{spec.node, spec.direction, spec.tree, spec.primary,
                static_cast<int>(spec.hops.size()), 0, 0, 0.0};
    if (!spec.hops.empty()) {
      d.best = delay_bound_ + 1;
      double total = 0.0;
      for (std::size_t t0 = 0; t0 < set_count_; ++t0) {
        const int x = delay_from(next, p, t0);
        d.worst = std::max(d.worst, x);
        d.best = std::min(d.best, x);
        total += x;
      }
      d.mean = total / static_cast<double>(set_count_);
    }
    if (spec.primary) {
      r.worst_case = std::max(r.worst_case, d.worst);
      sum += d.worst;
      ++primaries;
    }
    r.paths.push_back(d);
  }
  r.mean = primaries ? static_cast<double>(sum) / static_cast<double>(primaries) : 0.0;
  return r;
}

DelayReport worst_case_delay(const Schedule& schedule, const TransmissionSetCollection& tss,
                             const std::vector<PathSpec>& paths) {
  if (schedule.length() != tss.size()) throw Error("schedule length differs from set count");
  return DelayEvaluator(tss, paths).report(schedule.order);
}

void check_anneal_config(const AnnealConfig& config) {
  if (config.initial_temperature && !(*config.initial_temperature > 0.0)) {
    throw Error("anneal initial temperature must be > 0");
  }
  if (!(config.cooling > 0.0 && config.cooling < 1.0)) {
    throw Error("anneal cooling factor must be in (0, 1)");
  }
  if (config.steps < 0 || config.restarts < 1) throw Error("anneal steps/restarts out of range");
}

namespace {

struct Candidate {
  std::vector<std::size_t> order;
  Objective objective;
  std::uint64_t evaluations = 0;
};

Candidate brute_force(const DelayEvaluator& ev) {
  Candidate best;
  best.order = Schedule::identity(ev.set_count()).order;
  best.objective = ev.objective(best.order);
  best.evaluations = 1;
  // Rotations give identical delays, so slot 0 keeps set 0.
  std::vector<std::size_t> order = best.order;
  while (order.size() > 2 && std::next_permutation(order.begin() + 1, order.end())) {
    const Objective obj = ev.objective(order);
    ++best.evaluations;
    if (obj < best.objective) {
      best.objective = obj;
      best.order = order;
    }
  }
  return best;
}

double energy(const Objective& obj, std::size_t primaries, int bound) {
  const double mean = primaries ? static_cast<double>(obj.sum) / static_cast<double>(primaries) : 0.0;
  return obj.worst + mean / (bound + 1.0);
}

Candidate anneal_once(const DelayEvaluator& ev, const AnnealConfig& config,
                      std::size_t primaries, int restart) {
  Rng rng(mix_seed(config.seed, static_cast<std::uint64_t>(restart)));
  Candidate cur;
  cur.order = Schedule::identity(ev.set_count()).order;
  rng.shuffle(std::span<std::size_t>(cur.order));
  cur.objective = ev.objective(cur.order);
  cur.evaluations = 1;
  Candidate best = cur;

  const std::size_t L = ev.set_count();
  double e_cur = energy(cur.objective, primaries, ev.delay_bound());
  double temperature = config.initial_temperature.value_or(std::max(e_cur, 1.0));
  if (L < 2) return best;
  for (int step = 0; step < config.steps; ++step) {
    const std::size_t i = rng.below(L);
    std::size_t j = rng.below(L - 1);
    if (j >= i) ++j;
    std::swap(cur.order[i], cur.order[j]);
    const Objective obj = ev.objective(cur.order);
    ++best.evaluations;
    const double e_new = energy(obj, primaries, ev.delay_bound());
    const double delta = e_new - e_cur;
    const double u = rng.uniform01();
    if (delta <= 0.0 || u < std::exp(-delta / temperature)) {
      e_cur = e_new;
      cur.objective = obj;
      if (obj < best.objective) {
        best.objective = obj;
        best.order = cur.order;
      }
    } else {
      std::swap(cur.order[i], cur.order[j]);
    }
    temperature *= config.cooling;
  }
  return best;
}

Candidate anneal(const DelayEvaluator& ev, const AnnealConfig& config, std::size_t primaries) {
  Candidate best;
  best.order = Schedule::identity(ev.set_count()).order;
  best.objective = ev.objective(best.order);
  best.evaluations = 1;

  std::vector<Candidate> results(static_cast<std::size_t>(config.restarts));
  const int threads = std::max(1, config.threads);
  for (int base = 0; base < config.restarts; base += threads) {
    std::vector<std::future<Candidate>> batch;
    const int end = std::min(config.restarts, base + threads);
    for (int r = base; r < end; ++r) {
      if (threads == 1) {
        results[static_cast<std::size_t>(r)] = anneal_once(ev, config, primaries, r);
      } else {
        batch.push_back(std::async(std::launch::async, anneal_once, std::cref(ev),
                                   std::cref(config), primaries, r));
      }
    }
    for (std::size_t k = 0; k < batch.size(); ++k) {
      results[static_cast<std::size_t>(base) + k] = batch[k].get();
    }
  }
  // Fold in restart order so the outcome is independent of thread timing.
  for (auto& c : results) {
    best.evaluations += c.evaluations;
    if (c.objective < best.objective) {
      best.objective = c.objective;
      best.order = std::move(c.order);
    }
  }
  return best;
}

}  // namespace

OptimizeResult optimize_schedule(const TransmissionSetCollection& tss,
                                 const std::vector<PathSpec>& paths, const AnnealConfig& config,
                                 const OptimizeOptions& options) {
  check_anneal_config(config);
  std::vector<PathSpec> primaries;
  for (const auto& p : paths) {
    if (p.primary) primaries.push_back(p);
  }
  const std::size_t primary_count = primaries.size();
  const DelayEvaluator objective_ev(tss, std::move(primaries));

  const bool exhaustive = !options.force_anneal && tss.size() <= options.brute_force_limit;
  Candidate best = exhaustive ? brute_force(objective_ev)
                              : anneal(objective_ev, config, primary_count);

  OptimizeResult out;
  out.schedule.order = std::move(best.order);
  out.objective = best.objective;
  out.exhaustive = exhaustive;
  out.evaluations = best.evaluations;
  out.report = worst_case_delay(out.schedule, tss, paths);
  return out;
}

}  // namespace meshplan
