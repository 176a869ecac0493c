#include "meshplan/topogen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "meshplan/random.hpp"

namespace meshplan {

namespace {

constexpr std::array<Layer, 3> kLayerOrder{Layer::Gateway, Layer::RoofTop, Layer::Street};

const LayerSpec& spec_for(const GeneratorConfig& config, Layer layer) {
  for (const auto& s : config.layers) {
    if (s.layer == layer) return s;
  }
  throw Error("generator config has no layer " + std::string(to_string(layer)));
}

char prefix(Layer layer) {
  switch (layer) {
    case Layer::Gateway: return 'g';
    case Layer::RoofTop: return 'r';
    case Layer::Street: return 's';
  }
  return 's';
}

int cells(double extent, double cell) { return static_cast<int>(std::floor(extent / cell)); }

}  // namespace

std::vector<std::string> check_config(const GeneratorConfig& config) {
  for (Layer kind : kLayerOrder) {
    const auto n = std::count_if(config.layers.begin(), config.layers.end(),
                                 [&](const LayerSpec& s) { return s.layer == kind; });
    if (n != 1) {
      throw Error("generator config needs exactly one " + std::string(to_string(kind)) +
                  " layer, got " + std::to_string(n));
    }
  }
  if (config.sector_count < 1) throw Error("sector_count must be >= 1");
  for (const auto& s : config.layers) {
    const std::string name(to_string(s.layer));
    if (!(s.grid_cell > 0.0)) throw Error(name + ": grid_cell must be > 0");
    if (!(s.jitter >= 0.0)) throw Error(name + ": jitter must be >= 0");
    if (s.height_range[0] > s.height_range[1]) throw Error(name + ": height min > max");
    if (!(s.area.width > 0.0) || !(s.area.height > 0.0)) throw Error(name + ": empty area");
    if (s.grid_cell > s.area.width || s.grid_cell > s.area.height) {
      throw Error(name + ": grid_cell larger than area");
    }
  }
  if (config.los.max_range < 0.0) throw Error("los.max_range must be >= 0");

  std::vector<std::string> warnings;
  const double street = spec_for(config, Layer::Street).grid_cell;
  const double roof = spec_for(config, Layer::RoofTop).grid_cell;
  const double gw = spec_for(config, Layer::Gateway).grid_cell;
  if (!(street <= roof && roof <= gw)) {
    warnings.emplace_back("grid cells not ordered Street <= RoofTop <= Gateway");
  }
  return warnings;
}

namespace {

std::vector<Node> draw_nodes(const GeneratorConfig& config, Rng& rng) {
  check_config(config);
  std::vector<Node> nodes;
  for (Layer kind : kLayerOrder) {
    const LayerSpec& s = spec_for(config, kind);
    const int nx = cells(s.area.width, s.grid_cell);
    const int ny = cells(s.area.height, s.grid_cell);
    int serial = 0;
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        Node n;
        char id[32];
        std::snprintf(id, sizeof id, "%c%03d", prefix(kind), serial++);
        n.id = NodeId{id};
        n.layer = kind;
        n.sector_count = config.sector_count;
        const double cx = s.area.x + (i + 0.5) * s.grid_cell;
        const double cy = s.area.y + (j + 0.5) * s.grid_cell;
        n.position.x = cx + rng.uniform(-s.jitter, s.jitter);
        n.position.y = cy + rng.uniform(-s.jitter, s.jitter);
        n.position.z = rng.uniform(s.height_range[0], s.height_range[1]);
        nodes.push_back(std::move(n));
      }
    }
  }
  return nodes;
}

}  // namespace

std::vector<Node> generate_nodes(const GeneratorConfig& config) {
  Rng rng(config.seed);
  return draw_nodes(config, rng);
}

double los_probability(const LosModel& model, const Node& a, const Node& b) {
  const double d = distance(a.position, b.position);
  if (!(model.max_range > 0.0) || d >= model.max_range) return 0.0;
  const double reach = 1.0 - std::pow(d / model.max_range, model.range_decay);
  const double lift =
      1.0 + model.height_bonus * (a.position.z + b.position.z) / model.max_range;
  return std::clamp(reach * lift, 0.0, 1.0);
}

Topology generate_topology(const GeneratorConfig& config) {
  Rng rng(config.seed);
  auto nodes = draw_nodes(config, rng);
  std::sort(nodes.begin(), nodes.end(),
            [](const Node& l, const Node& r) { return l.id < r.id; });

  std::vector<Link> links;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      const double p = los_probability(config.los, nodes[i], nodes[j]);
      const double u = rng.uniform01();
      if (!(u < p)) continue;
      const double dx = nodes[j].position.x - nodes[i].position.x;
      const double dy = nodes[j].position.y - nodes[i].position.y;
      if (dx == 0.0 && dy == 0.0) continue;
      links.push_back(make_link(nodes[i], nodes[j]));
    }
  }
  return Topology(std::move(nodes), std::move(links));
}

}  // namespace meshplan
