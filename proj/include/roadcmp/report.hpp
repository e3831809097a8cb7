#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "roadcmp/graph.hpp"
#include "roadcmp/junction_metrics.hpp"
#include "roadcmp/path_metrics.hpp"
#include "roadcmp/pixel_metrics.hpp"
#include "roadcmp/subgraph_metrics.hpp"

namespace roadcmp {

inline constexpr const char* kToolVersion = "1.0.0";

// every metric the tool knows, in report order
const std::vector<std::string>& all_metric_names();
bool is_metric_name(const std::string& name);

struct ScoreParams {
    PixelParams pixel;
    PathParams path;
    JunctionParams junction;
    SubgraphParams subgraph;
    bool apls_symmetric = false;
    std::uint64_t seed = 0;  // propagated into the per-metric seeds
};

struct InputDesc {
    std::string path;
    std::string digest;
    std::size_t nodes = 0;
    std::size_t edges = 0;
    double length_m = 0.0;
};

struct ScoreOutcome {
    nlohmann::ordered_json report;
    bool any_failed = false;
};

// Computes the requested metrics and assembles the canonical report JSON.
// Per-metric failures are recorded under "errors" instead of aborting.
// Timings are only included when `with_timings` is set, keeping default
// reports byte-stable across runs.
ScoreOutcome score_pair(const GeoGraph& gt, const GeoGraph& pred,
                        const std::vector<std::string>& metrics, const ScoreParams& params,
                        const InputDesc& gt_desc, const InputDesc& pred_desc, bool with_timings);

// Scalar per metric used for correlation (the Table-style summary column).
std::optional<double> summary_scalar(const nlohmann::ordered_json& report,
                                     const std::string& metric);

nlohmann::ordered_json params_json(const ScoreParams& p);

std::string fnv1a64_hex(const std::string& bytes);

InputDesc describe_input(const std::string& path, const std::string& bytes, const GeoGraph& g);

}  // namespace roadcmp
