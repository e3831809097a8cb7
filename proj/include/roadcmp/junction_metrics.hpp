#pragma once

#include <cstdint>
#include <vector>

#include "roadcmp/graph.hpp"

namespace roadcmp {

// A junction (degree >= 3) or road endpoint (degree == 1). Degree-2 chains
// never produce features, so densification cannot manufacture them.
struct Feature {
    NodeId node = 0;
    Vec2 pos;
    int degree = 0;
    bool is_junction = false;  // false: endpoint
};

struct JunctionParams {
    double d_max = 25.0;      // matching radius, m
    double alpha = 2.0 / 25.0;  // meters-to-cost weight in the match cost
    double angle_tol = 45.0;  // legacy incident-edge pairing tolerance, deg
    std::uint64_t seed = 0;   // unused; kept for a uniform metric interface
};

struct LegacyJunctionScore {
    double f_correct = 0.0;
    double f_error = 0.0;
    double f1 = 0.0;
    int gt_junctions = 0;
    int pred_junctions = 0;
};

struct NewJunctionScore {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double tp = 0.0;
    double pp = 0.0;
    double ap = 0.0;
    int shared_edge_points = 0;  // edge points absorbed by more than one feature
};

// A single reported match, for the optional debug dump.
struct JunctionMatch {
    enum class Kind { feature_feature, gt_feature_to_pred_edge, pred_feature_to_gt_edge };
    Kind kind;
    NodeId gt_node = -1;    // -1 when that side is an edge point
    NodeId pred_node = -1;
    Vec2 gt_pos, pred_pos;
    int o_gt = 0, o_pred = 0;
    double cost = 0.0;
};

// Junctions, optionally plus endpoints; sorted by node id.
std::vector<Feature> extract_features(const GeoGraph& g, bool include_endpoints);

// Greedy nearest-junction matching and per-junction incident-edge pairing by
// direction. Junction-only features.
LegacyJunctionScore junct_legacy(const GeoGraph& gt, const GeoGraph& pred, const JunctionParams& p);

// Cost-based greedy matching over junctions + endpoints, with projection onto
// the other graph's edges as a fallback (edge points count as degree 2).
NewJunctionScore newj(const GeoGraph& gt, const GeoGraph& pred, const JunctionParams& p,
                      std::vector<JunctionMatch>* matches = nullptr);

}  // namespace roadcmp
