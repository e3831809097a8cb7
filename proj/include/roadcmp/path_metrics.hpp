#pragma once

#include <cstdint>
#include <vector>

#include "roadcmp/graph.hpp"
#include "roadcmp/graph_ops.hpp"

namespace roadcmp {

struct PathParams {
    int n_pairs = 200;            // sampled node pairs for tlts/apls
    double snap_radius = 25.0;    // endpoint correspondence radius, m
    double correct_tol = 0.05;    // tlts relative length tolerance
    double match_radius = 15.0;   // path-to-graph matching corridor, m
    double sample_spacing = 5.0;  // walk step along paths, m
    std::uint64_t seed = 0;
};

struct TLTSScore {
    double correct = 0.0;
    double too_long = 0.0;
    double too_short = 0.0;
    double infeasible = 0.0;
    int pairs = 0;  // pairs actually evaluated
};

// Contiguous sub-path intervals mapped to connected pieces of the target
// graph, plus the target edges each interval consumed.
struct PathMatch {
    struct Segment {
        double begin = 0.0;  // arc position on the source path, m
        double end = 0.0;
        std::vector<EdgeId> target_edges;
        double length() const { return end - begin; }
    };
    std::vector<Segment> segments;
    double path_length = 0.0;
};

struct NEWPScore {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    int n_paths_gt = 0;    // paths sampled for the recall direction
    int n_paths_pred = 0;  // paths sampled for the precision direction
};

// Too-long / too-short path length statistic. Pairs are drawn uniformly from
// gt nodes (connected pairs only, resampled up to 50 * n_pairs times);
// endpoints snap to the nearest pred location within snap_radius.
TLTSScore tlts(const GeoGraph& gt, const GeoGraph& pred, const PathParams& p);

// Average path length similarity: per pair min{1, |Lgt - Lest| / Lgt}, with
// contribution 1 for snap failures and disconnected pred endpoints;
// score = 1 - mean. `symmetric` averages with the graph roles swapped.
double apls(const GeoGraph& gt, const GeoGraph& pred, const PathParams& p, bool symmetric = false);

// Walks `path` at sample_spacing and projects each sample onto `target`.
// Samples within match_radius form segments; consecutive samples stay in one
// segment only while their projections are connected in `target` by a route
// no longer than 3x the inter-sample arc distance.
PathMatch match_path(const Path& path, const GeoGraph& source, const GeoGraph& target,
                     const PathParams& p);

// probability that a random sub-path is connected in the target:
// sum l(s)^2 / l(path)^2
double path_coverage_probability(const std::vector<double>& segment_lengths, double path_length);

// Per-direction bookkeeping for instrumented runs.
struct NEWPDiagnostics {
    std::vector<std::vector<EdgeId>> source_edges_per_path;  // ids in the original graph
    std::vector<std::vector<EdgeId>> target_edges_per_path;
    int sampling_failures = 0;
};

// Path score with exclusive sampling: sampled paths never share source
// edges, and matched target edges are consumed. Recall samples from gt and
// matches against pred; precision swaps the roles.
NEWPScore newp(const GeoGraph& gt, const GeoGraph& pred, const PathParams& p,
               NEWPDiagnostics* recall_diag = nullptr, NEWPDiagnostics* precision_diag = nullptr);

}  // namespace roadcmp
