#include "roadcmp/reference.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace roadcmp::reference {

Projection project_point(const GeoGraph& g, const Vec2& p) {
    if (g.node_count() == 0) throw std::domain_error("cannot project onto an empty graph");

    EdgeId best_edge = -1;
    double best_t = 0.0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t ei = 0; ei < g.edge_count(); ++ei) {
        const auto& e = g.edge(static_cast<EdgeId>(ei));
        const double t = project_param(g.pos(e.a), g.pos(e.b), p);
        const double d = distance(p, lerp(g.pos(e.a), g.pos(e.b), t));
        if (d < best_d || (d == best_d && (static_cast<EdgeId>(ei) < best_edge ||
                                           (static_cast<EdgeId>(ei) == best_edge && t < best_t)))) {
            best_d = d;
            best_edge = static_cast<EdgeId>(ei);
            best_t = t;
        }
    }
    std::optional<Projection> node_best;
    for (const std::uint32_t v : g.isolated_nodes()) {
        const double d = distance(g.pos(v), p);
        if (!node_best || d < node_best->dist) node_best = {GraphLocation::at_node(g.id_of(v)), d};
    }
    if (node_best && (best_edge < 0 || node_best->dist < best_d)) return *node_best;
    if (best_edge < 0) throw std::domain_error("cannot project onto an empty graph");
    if (best_t <= 0.0) return {GraphLocation::at_node(g.id_of(g.edge(best_edge).a)), best_d};
    if (best_t >= 1.0) return {GraphLocation::at_node(g.id_of(g.edge(best_edge).b)), best_d};
    return {GraphLocation::on_edge(best_edge, best_t), best_d};
}

CCQScore ccq(const Mask& gt, const Mask& pred, int slack) {
    if (gt.width != pred.width || gt.height != pred.height)
        throw std::invalid_argument("mask shapes differ");

    auto near_any = [&](const Mask& m, int x, int y) {
        for (int dy = -slack; dy <= slack; ++dy) {
            for (int dx = -slack; dx <= slack; ++dx) {
                const int nx = x + dx, ny = y + dy;
                if (nx < 0 || ny < 0 || nx >= m.width || ny >= m.height) continue;
                if (m.get(nx, ny)) return true;
            }
        }
        return false;
    };

    std::int64_t pred_total = 0, gt_total = 0, tp_rel = 0, gt_matched = 0;
    for (int y = 0; y < gt.height; ++y) {
        for (int x = 0; x < gt.width; ++x) {
            const bool p = pred.get(x, y);
            const bool t = gt.get(x, y);
            pred_total += p;
            gt_total += t;
            if (p && near_any(gt, x, y)) ++tp_rel;
            if (t && near_any(pred, x, y)) ++gt_matched;
        }
    }

    CCQScore s;
    const std::int64_t fp = pred_total - tp_rel;
    const std::int64_t fn = gt_total - gt_matched;
    s.correctness = pred_total > 0 ? static_cast<double>(tp_rel) / pred_total : 0.0;
    s.completeness = gt_total > 0 ? static_cast<double>(gt_matched) / gt_total : 0.0;
    const std::int64_t denom = tp_rel + fp + fn;
    s.quality = denom > 0 ? static_cast<double>(tp_rel) / denom : 0.0;
    return s;
}

namespace {

void dfs_paths(const GeoGraph& g, std::uint32_t v, std::uint32_t goal, double acc,
               std::vector<char>& visited, double& best) {
    if (v == goal) {
        best = std::min(best, acc);
        return;
    }
    if (acc >= best) return;
    for (const auto& adj : g.neighbors(v)) {
        if (visited[adj.neighbor]) continue;
        visited[adj.neighbor] = 1;
        dfs_paths(g, adj.neighbor, goal, acc + g.edge(adj.edge).length, visited, best);
        visited[adj.neighbor] = 0;
    }
}

}  // namespace

std::optional<double> shortest_path_exhaustive(const GeoGraph& g, NodeId a, NodeId b) {
    const auto ia = g.index_of(a), ib = g.index_of(b);
    if (!ia || !ib) throw std::invalid_argument("unknown node id");
    if (a == b) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    std::vector<char> visited(g.node_count(), 0);
    visited[*ia] = 1;
    dfs_paths(g, static_cast<std::uint32_t>(*ia), static_cast<std::uint32_t>(*ib), 0.0, visited, best);
    if (best == std::numeric_limits<double>::infinity()) return std::nullopt;
    return best;
}

double hungarian_bruteforce(const std::vector<std::vector<double>>& cost, double forbidden) {
    const int rows = static_cast<int>(cost.size());
    const int cols = rows > 0 ? static_cast<int>(cost[0].size()) : 0;
    if (rows == 0 || cols == 0) return 0.0;

    // permute the larger side over the smaller one
    const bool transposed = rows > cols;
    const int n = transposed ? cols : rows;
    const int m = transposed ? rows : cols;
    auto at = [&](int i, int j) {
        const double v = transposed ? cost[j][i] : cost[i][j];
        return std::min(v, forbidden);
    };

    std::vector<int> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double total = 0.0;
        for (int i = 0; i < n; ++i) total += at(i, perm[i]);
        best = std::min(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

}  // namespace roadcmp::reference
