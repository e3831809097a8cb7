#pragma once

#include <cstdint>
#include <vector>

#include "roadcmp/graph.hpp"

namespace roadcmp {

struct SubgraphParams {
    int n_starts = 200;        // sampled start locations
    double travel = 300.0;     // traversal budget per start, m
    double interval = 15.0;    // control-point spacing, m
    double match_dist = 15.0;  // control-point matching radius, m
    std::uint64_t seed = 0;
    bool swap_parity = false;  // exchange which iterations seed which graph
};

struct SubgraphScore {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::int64_t tp = 0;
    std::int64_t pp = 0;  // tp + unmatched prediction control points
    std::int64_t ap = 0;  // tp + unmatched ground-truth control points
};

// One optional record per iteration, for the JSON-lines debug dump.
struct SubgraphIteration {
    int index = 0;
    bool seeded_gt = true;
    Vec2 start;
    double counterpart_dist = 0.0;
    int gt_points = 0;
    int pred_points = 0;
    int matched = 0;
};

// Minimum-cost one-to-one assignment. Entries >= `forbidden` mark disallowed
// pairs; the result contains only allowed pairs. Deterministic.
std::vector<std::pair<int, int>> hungarian(const std::vector<std::vector<double>>& cost,
                                           double forbidden = 1e15);

// Start locations sampled on gt only; control points matched many-to-one
// within match_dist.
SubgraphScore graph_legacy(const GeoGraph& gt, const GeoGraph& pred, const SubgraphParams& p,
                           std::vector<SubgraphIteration>* dump = nullptr);

// Start locations alternate between the graphs and control points are
// matched one-to-one by minimum total distance.
SubgraphScore newg(const GeoGraph& gt, const GeoGraph& pred, const SubgraphParams& p,
                   std::vector<SubgraphIteration>* dump = nullptr);

}  // namespace roadcmp
