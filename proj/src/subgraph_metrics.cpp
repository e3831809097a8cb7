#include "roadcmp/subgraph_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "roadcmp/graph_ops.hpp"
#include "roadcmp/rng.hpp"
#include "roadcmp/spatial_index.hpp"
#include "roadcmp/stats.hpp"

namespace roadcmp {

std::vector<std::pair<int, int>> hungarian(const std::vector<std::vector<double>>& cost,
                                           double forbidden) {
    const int rows = static_cast<int>(cost.size());
    const int cols = rows > 0 ? static_cast<int>(cost[0].size()) : 0;
    if (rows == 0 || cols == 0) return {};
    for (const auto& row : cost) {
        if (static_cast<int>(row.size()) != cols)
            throw std::invalid_argument("cost matrix rows differ in length");
    }

    // solve with rows <= cols; transpose back afterwards
    const bool transposed = rows > cols;
    const int n = transposed ? cols : rows;
    const int m = transposed ? rows : cols;
    auto at = [&](int i, int j) {
        const double v = transposed ? cost[j][i] : cost[i][j];
        return std::min(v, forbidden);
    };

    // shortest augmenting path with potentials (rows/cols 1-based)
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
    std::vector<int> match(m + 1, 0);  // column -> row
    for (int i = 1; i <= n; ++i) {
        std::vector<double> min_v(m + 1, kInf);
        std::vector<int> way(m + 1, 0);
        std::vector<char> used(m + 1, 0);
        int j0 = 0;
        match[0] = i;
        do {
            used[j0] = 1;
            const int i0 = match[j0];
            double delta = kInf;
            int j1 = 0;
            for (int j = 1; j <= m; ++j) {
                if (used[j]) continue;
                const double cur = at(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < min_v[j]) {
                    min_v[j] = cur;
                    way[j] = j0;
                }
                if (min_v[j] < delta) {
                    delta = min_v[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_v[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const int j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<std::pair<int, int>> out;
    for (int j = 1; j <= m; ++j) {
        if (match[j] == 0) continue;
        const int i = match[j] - 1;
        const int jj = j - 1;
        if (at(i, jj) >= forbidden) continue;  // forced onto a disallowed pair
        out.emplace_back(transposed ? jj : i, transposed ? i : jj);
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// Control-point sets for one iteration: crop around the seeded start and
// around its projection onto the other graph (empty when the projection is
// farther than match_dist).
struct IterationCounts {
    std::int64_t tp = 0;
    std::int64_t ap_contrib = 0;  // tp + unmatched gt points
    std::int64_t pp_contrib = 0;  // tp + unmatched pred points
    SubgraphIteration record;
};

IterationCounts run_iteration(const GeoGraph& gt, const GeoGraph& pred,
                              const SegmentGrid& gt_index, const SegmentGrid& pred_index,
                              const ArcTable& gt_arcs, const ArcTable& pred_arcs,
                              const SubgraphParams& p, bool seed_gt, double u, bool one_to_one) {
    IterationCounts out;
    const GeoGraph& seed_graph = seed_gt ? gt : pred;
    const GeoGraph& other_graph = seed_gt ? pred : gt;
    const ArcTable& seed_arcs = seed_gt ? gt_arcs : pred_arcs;
    const SegmentGrid& other_index = seed_gt ? pred_index : gt_index;

    if (seed_arcs.empty()) return out;
    const GraphLocation start = seed_arcs.sample(u);
    const Vec2 start_pos = start.position(seed_graph);

    std::vector<Vec2> seed_points = crop_by_travel(seed_graph, start, p.travel, p.interval);
    std::vector<Vec2> other_points;
    double proj_dist = std::numeric_limits<double>::infinity();
    if (other_graph.node_count() > 0) {
        const auto proj = project_point(other_graph, other_index, start_pos);
        proj_dist = proj.dist;
        if (proj.dist <= p.match_dist && other_graph.edge_count() > 0) {
            other_points = crop_by_travel(other_graph, proj.location, p.travel, p.interval);
        }
    }

    const std::vector<Vec2>& gt_points = seed_gt ? seed_points : other_points;
    const std::vector<Vec2>& pred_points = seed_gt ? other_points : seed_points;

    std::int64_t matched = 0;
    if (one_to_one) {
        if (!gt_points.empty() && !pred_points.empty()) {
            std::vector<std::vector<double>> cost(gt_points.size(),
                                                  std::vector<double>(pred_points.size()));
            for (std::size_t i = 0; i < gt_points.size(); ++i) {
                for (std::size_t j = 0; j < pred_points.size(); ++j) {
                    const double d = distance(gt_points[i], pred_points[j]);
                    cost[i][j] = d <= p.match_dist ? d : 1e15;
                }
            }
            matched = static_cast<std::int64_t>(hungarian(cost).size());
        }
        // one-to-one: every point is either in a pair or left over
        out.tp = matched;
        out.ap_contrib = static_cast<std::int64_t>(gt_points.size());
        out.pp_contrib = static_cast<std::int64_t>(pred_points.size());
    } else {
        // many-to-one: matched gt points are the true positives, pred points
        // not near any gt point are the false positives
        std::int64_t pred_matched = 0;
        for (const auto& gp : gt_points) {
            for (const auto& pp : pred_points) {
                if (distance(gp, pp) <= p.match_dist) {
                    ++matched;
                    break;
                }
            }
        }
        for (const auto& pp : pred_points) {
            for (const auto& gp : gt_points) {
                if (distance(gp, pp) <= p.match_dist) {
                    ++pred_matched;
                    break;
                }
            }
        }
        out.tp = matched;
        out.ap_contrib = static_cast<std::int64_t>(gt_points.size());
        out.pp_contrib = matched + (static_cast<std::int64_t>(pred_points.size()) - pred_matched);
    }
    out.record.seeded_gt = seed_gt;
    out.record.start = start_pos;
    out.record.counterpart_dist = proj_dist;
    out.record.gt_points = static_cast<int>(gt_points.size());
    out.record.pred_points = static_cast<int>(pred_points.size());
    out.record.matched = static_cast<int>(matched);
    return out;
}

SubgraphScore run_subgraph_metric(const GeoGraph& gt, const GeoGraph& pred,
                                  const SubgraphParams& p, bool alternate, bool one_to_one,
                                  std::vector<SubgraphIteration>* dump) {
    const SegmentGrid gt_index(gt, std::max(p.match_dist, 1.0));
    const SegmentGrid pred_index(pred, std::max(p.match_dist, 1.0));
    const ArcTable gt_arcs(gt);
    const ArcTable pred_arcs(pred);

    // per-iteration draws are taken up front so the loop can run in any order
    Rng rng = Rng::substream(p.seed, alternate ? 0x4e455747 : 0x4752504c);
    std::vector<double> draws(static_cast<std::size_t>(p.n_starts));
    for (auto& d : draws) d = rng.next_double();

    std::vector<IterationCounts> results(draws.size());
#pragma omp parallel for schedule(dynamic, 4)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(draws.size()); ++i) {
        bool seed_gt = true;
        if (alternate) seed_gt = (i % 2 == 0) != p.swap_parity;
        results[static_cast<std::size_t>(i)] =
            run_iteration(gt, pred, gt_index, pred_index, gt_arcs, pred_arcs, p, seed_gt,
                          draws[static_cast<std::size_t>(i)], one_to_one);
    }

    SubgraphScore s;
    for (std::size_t i = 0; i < results.size(); ++i) {
        s.tp += results[i].tp;
        s.ap += results[i].ap_contrib;
        s.pp += results[i].pp_contrib;
        if (dump) {
            results[i].record.index = static_cast<int>(i);
            dump->push_back(results[i].record);
        }
    }
    s.precision = s.pp > 0 ? static_cast<double>(s.tp) / static_cast<double>(s.pp) : 0.0;
    s.recall = s.ap > 0 ? static_cast<double>(s.tp) / static_cast<double>(s.ap) : 0.0;
    s.f1 = harmonic_mean(s.precision, s.recall);
    return s;
}

}  // namespace

SubgraphScore graph_legacy(const GeoGraph& gt, const GeoGraph& pred, const SubgraphParams& p,
                           std::vector<SubgraphIteration>* dump) {
    if (gt.node_count() == 0) throw std::domain_error("ground truth graph is empty");
    return run_subgraph_metric(gt, pred, p, /*alternate=*/false, /*one_to_one=*/false, dump);
}

SubgraphScore newg(const GeoGraph& gt, const GeoGraph& pred, const SubgraphParams& p,
                   std::vector<SubgraphIteration>* dump) {
    if (gt.node_count() == 0 && pred.node_count() == 0)
        throw std::domain_error("both graphs are empty");
    return run_subgraph_metric(gt, pred, p, /*alternate=*/true, /*one_to_one=*/true, dump);
}

}  // namespace roadcmp
