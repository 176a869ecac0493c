#pragma once

// Random dense-urban test topologies: one perturbed grid per node layer and
// a distance/height dependent line-of-sight coin flip for every node pair.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "meshplan/netmodel.hpp"

namespace meshplan {

struct Area {
  double x = 0.0;
  double y = 0.0;
  double width = 0.0;
  double height = 0.0;
};

struct LayerSpec {
  Layer layer = Layer::Street;
  double grid_cell = 100.0;
  double jitter = 0.0;
  std::array<double, 2> height_range{0.0, 0.0};
  Area area;
};

struct LosModel {
  double max_range = 200.0;
  double range_decay = 2.0;
  double height_bonus = 0.0;
};

struct GeneratorConfig {
  std::vector<LayerSpec> layers;
  LosModel los;
  std::uint64_t seed = 1;
  int sector_count = 4;
};

/// Hard errors on malformed configs; returns soft warnings (layer grid
/// ordering) as strings.
std::vector<std::string> check_config(const GeneratorConfig& config);

/// Draw order (one Rng seeded with config.seed): layers Gateway, RoofTop,
/// Street; cells row-major (y outer, x inner); per cell x-jitter, y-jitter,
/// height. Ids are "g000", "r000", "s000", ... in the same order.
std::vector<Node> generate_nodes(const GeneratorConfig& config);

double los_probability(const LosModel& model, const Node& a, const Node& b);

/// Continues the node-drawing stream with one uniform draw per unordered
/// pair in sorted id order; the draw is consumed even when p is zero. Pairs
/// with no xy separation never get a link.
Topology generate_topology(const GeneratorConfig& config);

}  // namespace meshplan
