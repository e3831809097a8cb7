#include "roadcmp/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace roadcmp {

SegmentGrid::SegmentGrid(const GeoGraph& g, double cell_size) : g_(&g), cell_(cell_size) {
    if (g.node_count() == 0 || cell_size <= 0.0) return;
    BBox b = g.bounds();
    b.inflate(cell_size * 0.5);
    origin_x_ = b.min_x;
    origin_y_ = b.min_y;
    nx_ = std::max(1, static_cast<int>(std::ceil(b.width() / cell_)));
    ny_ = std::max(1, static_cast<int>(std::ceil(b.height() / cell_)));
    // keep the table bounded even for degenerate cell-size hints
    while (static_cast<long long>(nx_) * ny_ > (1LL << 22)) {
        cell_ *= 2.0;
        nx_ = std::max(1, static_cast<int>(std::ceil(b.width() / cell_)));
        ny_ = std::max(1, static_cast<int>(std::ceil(b.height() / cell_)));
    }
    cells_.assign(static_cast<std::size_t>(nx_) * ny_, {});

    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        const auto& ed = g.edge(static_cast<EdgeId>(e));
        const Vec2 a = g.pos(ed.a), b2 = g.pos(ed.b);
        const int x0 = std::clamp(static_cast<int>((std::min(a.x, b2.x) - origin_x_) / cell_), 0, nx_ - 1);
        const int x1 = std::clamp(static_cast<int>((std::max(a.x, b2.x) - origin_x_) / cell_), 0, nx_ - 1);
        const int y0 = std::clamp(static_cast<int>((std::min(a.y, b2.y) - origin_y_) / cell_), 0, ny_ - 1);
        const int y1 = std::clamp(static_cast<int>((std::max(a.y, b2.y) - origin_y_) / cell_), 0, ny_ - 1);
        for (int cy = y0; cy <= y1; ++cy) {
            for (int cx = x0; cx <= x1; ++cx) {
                // register only cells the segment actually comes near
                const Vec2 center{origin_x_ + (cx + 0.5) * cell_, origin_y_ + (cy + 0.5) * cell_};
                if (point_segment_distance(a, b2, center) <= cell_ * 0.7072)
                    cells_[static_cast<std::size_t>(cy) * nx_ + cx].push_back(static_cast<EdgeId>(e));
            }
        }
    }
}

void SegmentGrid::cell_of(const Vec2& p, int& cx, int& cy) const {
    cx = std::clamp(static_cast<int>(std::floor((p.x - origin_x_) / cell_)), 0, nx_ - 1);
    cy = std::clamp(static_cast<int>(std::floor((p.y - origin_y_) / cell_)), 0, ny_ - 1);
}

SegmentGrid::Hit SegmentGrid::nearest(const Vec2& p) const {
    Hit best;
    best.dist = std::numeric_limits<double>::infinity();
    if (!valid() || g_->edge_count() == 0) return best;

    int cx, cy;
    cell_of(p, cx, cy);
    const int max_ring = std::max(nx_, ny_);

    auto consider = [&](EdgeId e) {
        const auto& ed = g_->edge(e);
        const Vec2 a = g_->pos(ed.a), b = g_->pos(ed.b);
        const double t = project_param(a, b, p);
        const double d = distance(p, lerp(a, b, t));
        if (d < best.dist || (d == best.dist && (e < best.edge || (e == best.edge && t < best.t)))) {
            best = {e, t, d};
        }
    };

    for (int ring = 0; ring <= max_ring; ++ring) {
        // cells at Chebyshev distance `ring` can contain points no closer
        // than (ring-1) * cell; once best beats that, stop.
        if (best.edge >= 0 && static_cast<double>(ring - 1) * cell_ > best.dist) break;
        bool any_cell = false;
        const int x0 = cx - ring, x1 = cx + ring, y0 = cy - ring, y1 = cy + ring;
        for (int y = y0; y <= y1; ++y) {
            if (y < 0 || y >= ny_) continue;
            for (int x = x0; x <= x1; ++x) {
                if (x < 0 || x >= nx_) continue;
                if (ring > 0 && x != x0 && x != x1 && y != y0 && y != y1) continue;
                any_cell = true;
                for (const EdgeId e : cells_[static_cast<std::size_t>(y) * nx_ + x]) consider(e);
            }
        }
        if (!any_cell && ring > 0 && best.edge >= 0) break;
    }

    // the grid drops cells a segment only grazes; fall back if nothing found
    if (best.edge < 0) {
        for (std::size_t e = 0; e < g_->edge_count(); ++e) consider(static_cast<EdgeId>(e));
    }
    return best;
}

std::vector<EdgeId> SegmentGrid::within(const Vec2& p, double radius) const {
    std::vector<EdgeId> out;
    if (!valid()) return out;
    int cx, cy;
    cell_of(p, cx, cy);
    const int r = static_cast<int>(std::ceil(radius / cell_)) + 1;
    for (int y = std::max(0, cy - r); y <= std::min(ny_ - 1, cy + r); ++y) {
        for (int x = std::max(0, cx - r); x <= std::min(nx_ - 1, cx + r); ++x) {
            for (const EdgeId e : cells_[static_cast<std::size_t>(y) * nx_ + x]) {
                const auto& ed = g_->edge(e);
                if (point_segment_distance(g_->pos(ed.a), g_->pos(ed.b), p) <= radius)
                    out.push_back(e);
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace roadcmp
