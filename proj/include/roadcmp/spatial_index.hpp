#pragma once

#include <vector>

#include "roadcmp/graph.hpp"

namespace roadcmp {

// Uniform grid over edge segments for nearest-segment queries. Purely an
// accelerator: results must match a linear scan over all edges exactly
// (verified against reference::project_point in the tests).
class SegmentGrid {
public:
    SegmentGrid() = default;
    SegmentGrid(const GeoGraph& g, double cell_size);

    struct Hit {
        EdgeId edge = -1;
        double t = 0.0;
        double dist = 0.0;
    };

    // Nearest point over all edges; ties by (edge id, t).
    Hit nearest(const Vec2& p) const;

    // Edges whose segment comes within `radius` of p (superset allowed is
    // not: exact distance filter applied). Sorted by edge id.
    std::vector<EdgeId> within(const Vec2& p, double radius) const;

    bool valid() const { return g_ != nullptr && !cells_.empty(); }

private:
    std::vector<const std::vector<EdgeId>*> candidate_cells(int cx, int cy, int ring) const;
    void cell_of(const Vec2& p, int& cx, int& cy) const;

    const GeoGraph* g_ = nullptr;
    double cell_ = 0.0;
    double origin_x_ = 0.0, origin_y_ = 0.0;
    int nx_ = 0, ny_ = 0;
    std::vector<std::vector<EdgeId>> cells_;
};

}  // namespace roadcmp
