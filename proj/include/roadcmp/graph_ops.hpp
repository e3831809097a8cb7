#pragma once

#include <optional>
#include <set>
#include <vector>

#include "roadcmp/graph.hpp"
#include "roadcmp/spatial_index.hpp"

namespace roadcmp {

// Insert degree-2 nodes so no edge is longer than `spacing`. Geometry is
// preserved exactly; original nodes and ids are retained, inserted nodes get
// fresh ids above the current maximum.
GeoGraph densify(const GeoGraph& g, double spacing);

// Minimal-Euclidean-length path between two nodes, or nullopt if they are in
// different components. Ties are broken toward the lexicographically
// smallest node-id sequence. a == b yields the single-node path of length 0.
std::optional<Path> shortest_path(const GeoGraph& g, NodeId a, NodeId b);

// Distance between two arbitrary graph locations, and the edges a realizing
// path traverses (including the partially traversed end edges). Infinity if
// disconnected or if `cutoff` (when >= 0) is exceeded.
struct LocationRoute {
    double dist = 0.0;
    std::vector<EdgeId> edges;
};
std::optional<LocationRoute> route_between(const GeoGraph& g, const GraphLocation& from,
                                           const GraphLocation& to, double cutoff = -1.0);
double distance_between(const GeoGraph& g, const GraphLocation& from, const GraphLocation& to,
                        double cutoff = -1.0);

// Closest location on the graph to p; ties by (edge id, t). Projections that
// land on a segment end are canonicalized to node locations. Throws
// std::domain_error on an empty graph.
struct Projection {
    GraphLocation location;
    double dist = 0.0;
};
Projection project_point(const GeoGraph& g, const Vec2& p);
Projection project_point(const GeoGraph& g, const SegmentGrid& index, const Vec2& p);

// Positions reachable by travelling at most `budget` meters from `start`,
// sampled at every multiple of `interval` of travel distance (distance 0
// included). Each geometric position appears once; output sorted by (x, y).
std::vector<Vec2> crop_by_travel(const GeoGraph& g, const GraphLocation& start, double budget,
                                 double interval);

// Copy of g without the given edges; nodes whose degree drops to 0 are
// removed. `surviving`, when given, receives for each edge of the result the
// edge id it had in g.
GeoGraph remove_edges(const GeoGraph& g, const std::set<EdgeId>& edges,
                      std::vector<EdgeId>* surviving = nullptr);

}  // namespace roadcmp
