#include "roadcmp/junction_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "roadcmp/graph_ops.hpp"
#include "roadcmp/spatial_index.hpp"
#include "roadcmp/stats.hpp"

namespace roadcmp {

std::vector<Feature> extract_features(const GeoGraph& g, bool include_endpoints) {
    std::vector<Feature> out;
    for (std::size_t v = 0; v < g.node_count(); ++v) {
        const int deg = static_cast<int>(g.degree(v));
        if (deg >= 3 || (include_endpoints && deg == 1)) {
            out.push_back({g.id_of(v), g.pos(v), deg, deg >= 3});
        }
    }
    std::sort(out.begin(), out.end(),
              [](const Feature& a, const Feature& b) { return a.node < b.node; });
    return out;
}

namespace {

// Unit directions of the incident edges at a node, in adjacency order.
std::vector<Vec2> incident_directions(const GeoGraph& g, NodeId id) {
    const auto idx = g.index_of(id).value();
    std::vector<Vec2> dirs;
    for (const auto& adj : g.neighbors(idx)) {
        dirs.push_back((g.pos(adj.neighbor) - g.pos(idx)).normalized());
    }
    return dirs;
}

double angle_between_deg(const Vec2& a, const Vec2& b) {
    const double c = std::clamp(a.dot(b), -1.0, 1.0);
    return std::acos(c) * 180.0 / 3.14159265358979323846;
}

// One-to-one direction pairing within the angular tolerance; returns the
// number of paired directions.
int pair_directions(const std::vector<Vec2>& gt_dirs, const std::vector<Vec2>& pred_dirs,
                    double angle_tol) {
    struct Cand {
        double angle;
        std::size_t i, j;
    };
    std::vector<Cand> cands;
    for (std::size_t i = 0; i < gt_dirs.size(); ++i) {
        for (std::size_t j = 0; j < pred_dirs.size(); ++j) {
            const double a = angle_between_deg(gt_dirs[i], pred_dirs[j]);
            if (a <= angle_tol) cands.push_back({a, i, j});
        }
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        return std::tie(a.angle, a.i, a.j) < std::tie(b.angle, b.i, b.j);
    });
    std::vector<char> used_i(gt_dirs.size(), 0), used_j(pred_dirs.size(), 0);
    int paired = 0;
    for (const auto& c : cands) {
        if (used_i[c.i] || used_j[c.j]) continue;
        used_i[c.i] = used_j[c.j] = 1;
        ++paired;
    }
    return paired;
}

}  // namespace

LegacyJunctionScore junct_legacy(const GeoGraph& gt, const GeoGraph& pred,
                                 const JunctionParams& p) {
    const auto gt_junctions = extract_features(gt, false);
    const auto pred_junctions = extract_features(pred, false);

    LegacyJunctionScore s;
    s.gt_junctions = static_cast<int>(gt_junctions.size());
    s.pred_junctions = static_cast<int>(pred_junctions.size());

    struct Cand {
        double dist;
        std::size_t gi, pj;
    };
    std::vector<Cand> cands;
    for (std::size_t gi = 0; gi < gt_junctions.size(); ++gi) {
        for (std::size_t pj = 0; pj < pred_junctions.size(); ++pj) {
            const double d = distance(gt_junctions[gi].pos, pred_junctions[pj].pos);
            if (d <= p.d_max) cands.push_back({d, gi, pj});
        }
    }
    std::sort(cands.begin(), cands.end(), [&](const Cand& a, const Cand& b) {
        return std::tie(a.dist, gt_junctions[a.gi].node, pred_junctions[a.pj].node) <
               std::tie(b.dist, gt_junctions[b.gi].node, pred_junctions[b.pj].node);
    });

    std::vector<std::size_t> match_of_gt(gt_junctions.size(), SIZE_MAX);
    std::vector<std::size_t> match_of_pred(pred_junctions.size(), SIZE_MAX);
    for (const auto& c : cands) {
        if (match_of_gt[c.gi] != SIZE_MAX || match_of_pred[c.pj] != SIZE_MAX) continue;
        match_of_gt[c.gi] = c.pj;
        match_of_pred[c.pj] = c.gi;
    }

    double n_correct = 0.0, n_error = 0.0;
    for (std::size_t gi = 0; gi < gt_junctions.size(); ++gi) {
        if (match_of_gt[gi] == SIZE_MAX) continue;  // unmatched contributes 0
        const auto& v = gt_junctions[gi];
        const auto& u = pred_junctions[match_of_gt[gi]];
        const int paired = pair_directions(incident_directions(gt, v.node),
                                           incident_directions(pred, u.node), p.angle_tol);
        n_correct += static_cast<double>(paired) / v.degree;
    }
    for (std::size_t pj = 0; pj < pred_junctions.size(); ++pj) {
        const auto& u = pred_junctions[pj];
        if (match_of_pred[pj] == SIZE_MAX) {
            n_error += 1.0;
            continue;
        }
        const auto& v = gt_junctions[match_of_pred[pj]];
        const int paired = pair_directions(incident_directions(gt, v.node),
                                           incident_directions(pred, u.node), p.angle_tol);
        n_error += static_cast<double>(u.degree - paired) / u.degree;
    }

    s.f_correct = gt_junctions.empty() ? 0.0 : n_correct / static_cast<double>(gt_junctions.size());
    s.f_error = (n_correct + n_error) > 0.0 ? n_error / (n_correct + n_error) : 0.0;
    s.f1 = harmonic_mean(s.f_correct, 1.0 - s.f_error);
    return s;
}

namespace {

struct NewjCandidate {
    double cost = 0.0;
    int kind = 0;  // 0 feature-feature, 1 gt-feature/pred-edge, 2 gt-edge/pred-feature
    std::size_t gi = SIZE_MAX;  // feature indices; SIZE_MAX when that side is an edge point
    std::size_t pj = SIZE_MAX;
    int o_i = 2, o_j = 2;
    Vec2 gt_pos, pred_pos;
    NodeId gt_node = -1, pred_node = -1;
    EdgeId point_edge = -1;  // target edge behind the edge-point side, if any

    auto tie_key() const {
        return std::tie(cost, kind, gt_node, gt_pos.x, gt_pos.y, pred_node, pred_pos.x, pred_pos.y);
    }
};

}  // namespace

NewJunctionScore newj(const GeoGraph& gt, const GeoGraph& pred, const JunctionParams& p,
                      std::vector<JunctionMatch>* matches) {
    const auto gt_features = extract_features(gt, true);
    const auto pred_features = extract_features(pred, true);

    std::vector<NewjCandidate> cands;
    for (std::size_t gi = 0; gi < gt_features.size(); ++gi) {
        for (std::size_t pj = 0; pj < pred_features.size(); ++pj) {
            const double d = distance(gt_features[gi].pos, pred_features[pj].pos);
            if (d > p.d_max) continue;
            NewjCandidate c;
            c.kind = 0;
            c.gi = gi;
            c.pj = pj;
            c.o_i = gt_features[gi].degree;
            c.o_j = pred_features[pj].degree;
            c.cost = p.alpha * d + std::abs(c.o_i - c.o_j);
            c.gt_pos = gt_features[gi].pos;
            c.pred_pos = pred_features[pj].pos;
            c.gt_node = gt_features[gi].node;
            c.pred_node = pred_features[pj].node;
            cands.push_back(c);
        }
    }

    // fallback: features may match the closest point on the other graph's
    // edges, which counts as a degree-2 feature by convention
    const double cell = std::max(p.d_max, 1.0);
    if (pred.edge_count() > 0) {
        const SegmentGrid pred_index(pred, cell);
        for (std::size_t gi = 0; gi < gt_features.size(); ++gi) {
            const auto proj = project_point(pred, pred_index, gt_features[gi].pos);
            if (proj.dist > p.d_max) continue;
            NewjCandidate c;
            c.kind = 1;
            c.gi = gi;
            c.o_i = gt_features[gi].degree;
            c.o_j = 2;
            c.cost = p.alpha * proj.dist + std::abs(c.o_i - c.o_j);
            c.gt_pos = gt_features[gi].pos;
            c.pred_pos = proj.location.position(pred);
            c.gt_node = gt_features[gi].node;
            c.point_edge = proj.location.is_node() ? -1 : proj.location.edge;
            cands.push_back(c);
        }
    }
    if (gt.edge_count() > 0) {
        const SegmentGrid gt_index(gt, cell);
        for (std::size_t pj = 0; pj < pred_features.size(); ++pj) {
            const auto proj = project_point(gt, gt_index, pred_features[pj].pos);
            if (proj.dist > p.d_max) continue;
            NewjCandidate c;
            c.kind = 2;
            c.pj = pj;
            c.o_i = 2;
            c.o_j = pred_features[pj].degree;
            c.cost = p.alpha * proj.dist + std::abs(c.o_i - c.o_j);
            c.gt_pos = proj.location.position(gt);
            c.pred_pos = pred_features[pj].pos;
            c.pred_node = pred_features[pj].node;
            c.point_edge = proj.location.is_node() ? -1 : proj.location.edge;
            cands.push_back(c);
        }
    }

    std::sort(cands.begin(), cands.end(),
              [](const NewjCandidate& a, const NewjCandidate& b) { return a.tie_key() < b.tie_key(); });

    // greedy acceptance: each feature in at most one match, edge points free
    std::vector<char> gt_used(gt_features.size(), 0), pred_used(pred_features.size(), 0);
    std::map<EdgeId, int> edge_point_hits;
    double tp = 0.0, matched_o_gt = 0.0, matched_o_pred = 0.0;
    for (const auto& c : cands) {
        if (c.gi != SIZE_MAX && gt_used[c.gi]) continue;
        if (c.pj != SIZE_MAX && pred_used[c.pj]) continue;
        if (c.gi != SIZE_MAX) gt_used[c.gi] = 1;
        if (c.pj != SIZE_MAX) pred_used[c.pj] = 1;
        tp += std::min(c.o_i, c.o_j);
        matched_o_gt += c.o_i;
        matched_o_pred += c.o_j;
        if (c.kind != 0 && c.point_edge >= 0) ++edge_point_hits[c.point_edge];
        if (matches) {
            JunctionMatch m;
            m.kind = c.kind == 0   ? JunctionMatch::Kind::feature_feature
                     : c.kind == 1 ? JunctionMatch::Kind::gt_feature_to_pred_edge
                                   : JunctionMatch::Kind::pred_feature_to_gt_edge;
            m.gt_node = c.gt_node;
            m.pred_node = c.pred_node;
            m.gt_pos = c.gt_pos;
            m.pred_pos = c.pred_pos;
            m.o_gt = c.o_i;
            m.o_pred = c.o_j;
            m.cost = c.cost;
            matches->push_back(m);
        }
    }

    NewJunctionScore s;
    double unmatched_gt = 0.0, unmatched_pred = 0.0;
    for (std::size_t gi = 0; gi < gt_features.size(); ++gi)
        if (!gt_used[gi]) unmatched_gt += gt_features[gi].degree;
    for (std::size_t pj = 0; pj < pred_features.size(); ++pj)
        if (!pred_used[pj]) unmatched_pred += pred_features[pj].degree;

    s.tp = tp;
    s.pp = matched_o_pred + unmatched_pred;
    s.ap = matched_o_gt + unmatched_gt;
    s.precision = s.pp > 0.0 ? s.tp / s.pp : 0.0;
    s.recall = s.ap > 0.0 ? s.tp / s.ap : 0.0;
    s.f1 = harmonic_mean(s.precision, s.recall);
    for (const auto& [edge, hits] : edge_point_hits)
        if (hits > 1) ++s.shared_edge_points;
    return s;
}

}  // namespace roadcmp
