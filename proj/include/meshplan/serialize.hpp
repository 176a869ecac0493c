#pragma once

// JSON interchange for every inter-stage artifact.

#include <filesystem>
#include <memory>
#include <string>

#include <json.hpp>

#include "meshplan/metrics.hpp"
#include "meshplan/pipeline.hpp"
#include "meshplan/topogen.hpp"

namespace meshplan {

using Json = nlohmann::json;

Json to_json(const Topology& topology);
/// Links may omit sector_a/sector_b (recomputed from geometry) and length
/// (recomputed as 3D distance).
Topology topology_from_json(const Json& j);

Json to_json(const GeneratorConfig& config);
GeneratorConfig generator_config_from_json(const Json& j);

Json to_json(const ActiveTopology& active);
ActiveTopology active_from_json(const Json& j);  // embedded "topology"

Json to_json(const RoutingConfig& routing, const Topology& topology);
RoutingConfig routing_from_json(const Json& j, const Topology& topology);

/// With `embed` set the active topology is stored under "active" so the
/// file is self-contained.
Json to_json(const TransmissionSetCollection& tss, const ActiveTopology& active, bool embed);
TransmissionSetCollection tss_from_json(const Json& j, const Topology& topology);

Json to_json(const DelayReport& report, const Topology& topology);
Json schedule_to_json(const Schedule& schedule, const Objective& objective, bool exhaustive,
                      const DelayReport& report, const Topology& topology);

Json to_json(const AnnealConfig& config);
AnnealConfig anneal_from_json(const Json& j, AnnealConfig base = {});
Json to_json(const PipelineConfig& config);
PipelineConfig pipeline_config_from_json(const Json& j, PipelineConfig base = {});

Json to_json(const NetworkConfiguration& config);

Json to_json(const RunMetrics& metrics);
RunMetrics run_metrics_from_json(const Json& j);

Json read_json_file(const std::filesystem::path& path);
/// Pretty-printed with a trailing newline; byte-stable for equal input.
void write_json_file(const std::filesystem::path& path, const Json& j);
std::string dump(const Json& j);

}  // namespace meshplan
