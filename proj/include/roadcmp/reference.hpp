#pragma once

#include <optional>
#include <vector>

#include "roadcmp/graph.hpp"
#include "roadcmp/graph_ops.hpp"
#include "roadcmp/pixel_metrics.hpp"

// Plain serial implementations kept alongside the optimized kernels. They are
// deliberately simple (linear scans, exhaustive enumeration), serve as the
// ground truth in the tests, and feed the benchmark comparing the two paths.
namespace roadcmp::reference {

// Nearest location by scanning every edge.
Projection project_point(const GeoGraph& g, const Vec2& p);

// Relaxed pixel scores via a per-pixel neighborhood scan.
CCQScore ccq(const Mask& gt, const Mask& pred, int slack);

// Exhaustive minimum over all simple paths. Exponential; only for graphs of
// a dozen nodes or so.
std::optional<double> shortest_path_exhaustive(const GeoGraph& g, NodeId a, NodeId b);

// Minimum assignment cost by trying every permutation (n, m <= 9).
double hungarian_bruteforce(const std::vector<std::vector<double>>& cost,
                            double forbidden = 1e15);

}  // namespace roadcmp::reference
