#include "roadcmp/path_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "roadcmp/rng.hpp"
#include "roadcmp/spatial_index.hpp"
#include "roadcmp/stats.hpp"

namespace roadcmp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct SampledPair {
    std::uint32_t a;
    std::uint32_t b;
};

// Connected node pairs, uniform over gt nodes, resampled while the pair is
// disconnected or degenerate. Sampling is sequential and seed-determined, so
// pair evaluation can run in any order afterwards.
std::vector<SampledPair> sample_pairs(const GeoGraph& gt, const PathParams& p, std::uint64_t tag) {
    if (gt.node_count() < 2) throw std::domain_error("need at least 2 nodes to sample path pairs");
    const auto comp = gt.components();
    Rng rng = Rng::substream(p.seed, tag);
    std::vector<SampledPair> pairs;
    pairs.reserve(static_cast<std::size_t>(p.n_pairs));
    const long long max_attempts = 50LL * p.n_pairs;
    for (long long attempt = 0;
         attempt < max_attempts && pairs.size() < static_cast<std::size_t>(p.n_pairs); ++attempt) {
        const auto a = static_cast<std::uint32_t>(rng.index(gt.node_count()));
        const auto b = static_cast<std::uint32_t>(rng.index(gt.node_count()));
        if (a == b || comp[a] != comp[b]) continue;
        pairs.push_back({a, b});
    }
    return pairs;
}

struct PairOutcome {
    double l_gt = 0.0;
    double l_est = kInf;  // inf when an endpoint fails to snap or pred is disconnected
};

std::vector<PairOutcome> evaluate_pairs(const GeoGraph& gt, const GeoGraph& pred,
                                        const std::vector<SampledPair>& pairs,
                                        const PathParams& p) {
    std::vector<PairOutcome> out(pairs.size());
    const double cell = p.snap_radius > 0 ? p.snap_radius : 10.0;
    const SegmentGrid pred_index(pred, cell);
    const bool pred_usable = pred.node_count() > 0;

#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(pairs.size()); ++i) {
        const auto [a, b] = pairs[static_cast<std::size_t>(i)];
        PairOutcome& o = out[static_cast<std::size_t>(i)];
        const GraphLocation la = GraphLocation::at_node(gt.id_of(a));
        const GraphLocation lb = GraphLocation::at_node(gt.id_of(b));
        o.l_gt = distance_between(gt, la, lb);
        if (!pred_usable) continue;
        const auto pa = project_point(pred, pred_index, gt.pos(a));
        const auto pb = project_point(pred, pred_index, gt.pos(b));
        if (pa.dist > p.snap_radius || pb.dist > p.snap_radius) continue;
        if (pred.edge_count() == 0) continue;
        o.l_est = distance_between(pred, pa.location, pb.location);
    }
    return out;
}

}  // namespace

TLTSScore tlts(const GeoGraph& gt, const GeoGraph& pred, const PathParams& p) {
    const auto pairs = sample_pairs(gt, p, /*tag=*/0x544c5453);
    const auto outcomes = evaluate_pairs(gt, pred, pairs, p);
    TLTSScore s;
    s.pairs = static_cast<int>(outcomes.size());
    if (outcomes.empty()) return s;
    int correct = 0, too_long = 0, too_short = 0, infeasible = 0;
    for (const auto& o : outcomes) {
        if (o.l_est == kInf) {
            ++infeasible;
        } else if (o.l_gt <= 0.0) {
            ++correct;  // coincident endpoints in a degenerate graph
        } else if (std::abs(o.l_est - o.l_gt) / o.l_gt <= p.correct_tol) {
            ++correct;
        } else if (o.l_est > o.l_gt) {
            ++too_long;
        } else {
            ++too_short;
        }
    }
    const double n = static_cast<double>(outcomes.size());
    s.correct = correct / n;
    s.too_long = too_long / n;
    s.too_short = too_short / n;
    s.infeasible = infeasible / n;
    return s;
}

namespace {

double apls_one_direction(const GeoGraph& gt, const GeoGraph& pred, const PathParams& p,
                          std::uint64_t tag) {
    const auto pairs = sample_pairs(gt, p, tag);
    if (pairs.empty()) return 0.0;
    const auto outcomes = evaluate_pairs(gt, pred, pairs, p);
    double sum = 0.0;
    for (const auto& o : outcomes) {
        if (o.l_est == kInf) {
            sum += 1.0;
        } else if (o.l_gt > 0.0) {
            sum += std::min(1.0, std::abs(o.l_gt - o.l_est) / o.l_gt);
        }
    }
    return 1.0 - sum / static_cast<double>(outcomes.size());
}

}  // namespace

double apls(const GeoGraph& gt, const GeoGraph& pred, const PathParams& p, bool symmetric) {
    const double forward = apls_one_direction(gt, pred, p, /*tag=*/0x41504c53);
    if (!symmetric) return forward;
    const double backward = apls_one_direction(pred, gt, p, /*tag=*/0x41504c54);
    return 0.5 * (forward + backward);
}

double path_coverage_probability(const std::vector<double>& segment_lengths, double path_length) {
    if (!(path_length > 0.0)) return 0.0;
    double sum = 0.0;
    for (const double l : segment_lengths) sum += l * l;
    return sum / (path_length * path_length);
}

PathMatch match_path(const Path& path, const GeoGraph& source, const GeoGraph& target,
                     const PathParams& p) {
    PathMatch match;
    match.path_length = path.length;
    if (path.nodes.size() < 2 || path.length <= 0.0) return match;
    if (target.edge_count() == 0) return match;

    // arc positions sampled along the path, endpoint included
    std::vector<double> arcs;
    for (double s = 0.0; s < path.length; s += p.sample_spacing) arcs.push_back(s);
    if (path.length - arcs.back() > 1e-9) arcs.push_back(path.length);

    // walk the polyline once to place the samples
    std::vector<Vec2> samples(arcs.size());
    {
        std::size_t leg = 0;
        double leg_start = 0.0;
        double leg_len = distance(source.pos(path.nodes[0]), source.pos(path.nodes[1]));
        for (std::size_t i = 0; i < arcs.size(); ++i) {
            while (arcs[i] > leg_start + leg_len && leg + 2 < path.nodes.size()) {
                leg_start += leg_len;
                ++leg;
                leg_len = distance(source.pos(path.nodes[leg]), source.pos(path.nodes[leg + 1]));
            }
            const double t = leg_len > 0.0 ? std::clamp((arcs[i] - leg_start) / leg_len, 0.0, 1.0) : 0.0;
            samples[i] = lerp(source.pos(path.nodes[leg]), source.pos(path.nodes[leg + 1]), t);
        }
    }

    const SegmentGrid target_index(target, std::max(p.match_radius, p.sample_spacing));

    PathMatch::Segment* open = nullptr;
    std::set<EdgeId> open_edges;
    bool prev_covered = false;
    Projection prev_proj;

    auto close_segment = [&]() {
        if (open) {
            open->target_edges.assign(open_edges.begin(), open_edges.end());
            open_edges.clear();
            open = nullptr;
        }
    };

    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto proj = project_point(target, target_index, samples[i]);
        const bool near = proj.dist <= p.match_radius;
        if (!near) {
            close_segment();
            prev_covered = false;
            continue;
        }
        bool extends = false;
        std::optional<LocationRoute> route;
        if (prev_covered && open) {
            const double corridor = 3.0 * (arcs[i] - open->end);
            route = route_between(target, prev_proj.location, proj.location, corridor);
            extends = route.has_value();
        }
        if (extends) {
            open->end = arcs[i];
            for (const EdgeId e : route->edges) open_edges.insert(e);
        } else {
            close_segment();
            match.segments.push_back({arcs[i], arcs[i], {}});
            open = &match.segments.back();
        }
        if (!proj.location.is_node()) open_edges.insert(proj.location.edge);
        prev_covered = true;
        prev_proj = proj;
    }
    close_segment();
    return match;
}

namespace {

struct DirectionResult {
    double score = 0.0;
    int n_paths = 0;
};

// One sampling direction: draw non-overlapping paths from `source_full`,
// match each against the shrinking copy of `target_full`, and average the
// coverage probabilities.
DirectionResult newp_direction(const GeoGraph& source_full, const GeoGraph& target_full,
                               const PathParams& p, std::uint64_t tag, NEWPDiagnostics* diag) {
    DirectionResult result;
    GeoGraph source = source_full;
    GeoGraph target = target_full;
    // map current edge ids back to ids in the original graphs
    std::vector<EdgeId> source_orig(source.edge_count());
    std::vector<EdgeId> target_orig(target.edge_count());
    for (std::size_t i = 0; i < source_orig.size(); ++i) source_orig[i] = static_cast<EdgeId>(i);
    for (std::size_t i = 0; i < target_orig.size(); ++i) target_orig[i] = static_cast<EdgeId>(i);

    Rng rng = Rng::substream(p.seed, tag);
    const double min_path = 2.0 * p.sample_spacing;
    double p_sum = 0.0;
    int failures = 0;

    // Sampling continues until the source side is exhausted: once the target
    // runs dry the remaining source paths simply match nothing, which is what
    // penalizes surplus material (doubled roads, far false positives).
    while (source.edge_count() > 0 && failures < 10) {
        // two nodes from one connected component of the remaining source
        const auto comp = source.components();
        std::vector<std::uint32_t> active;
        active.reserve(source.node_count());
        for (std::size_t v = 0; v < source.node_count(); ++v) {
            if (source.degree(v) > 0) active.push_back(static_cast<std::uint32_t>(v));
        }
        if (active.empty()) break;
        const std::uint32_t a = active[rng.index(active.size())];
        std::vector<std::uint32_t> same;
        for (const std::uint32_t v : active) {
            if (v != a && comp[v] == comp[a]) same.push_back(v);
        }
        if (same.empty()) {
            ++failures;
            continue;
        }
        const std::uint32_t b = same[rng.index(same.size())];
        const auto path = shortest_path(source, source.id_of(a), source.id_of(b));
        if (!path || path->length < min_path) {
            ++failures;
            continue;
        }
        failures = 0;

        const PathMatch match = match_path(*path, source, target, p);
        std::vector<double> seg_lengths;
        seg_lengths.reserve(match.segments.size());
        for (const auto& s : match.segments) seg_lengths.push_back(s.length());
        p_sum += path_coverage_probability(seg_lengths, path->length);
        ++result.n_paths;

        // consume the sampled path from the source...
        std::set<EdgeId> used_source;
        for (std::size_t i = 0; i + 1 < path->nodes.size(); ++i) {
            for (const auto& adj : source.neighbors(path->nodes[i])) {
                if (adj.neighbor == path->nodes[i + 1]) {
                    used_source.insert(adj.edge);
                    break;
                }
            }
        }
        // ...and the matched edges from the target
        std::set<EdgeId> used_target;
        for (const auto& s : match.segments)
            used_target.insert(s.target_edges.begin(), s.target_edges.end());

        if (diag) {
            auto& src_rec = diag->source_edges_per_path.emplace_back();
            for (const EdgeId e : used_source) src_rec.push_back(source_orig[static_cast<std::size_t>(e)]);
            auto& tgt_rec = diag->target_edges_per_path.emplace_back();
            for (const EdgeId e : used_target) tgt_rec.push_back(target_orig[static_cast<std::size_t>(e)]);
        }

        std::vector<EdgeId> survive;
        source = remove_edges(source, used_source, &survive);
        std::vector<EdgeId> next_orig;
        next_orig.reserve(survive.size());
        for (const EdgeId e : survive) next_orig.push_back(source_orig[static_cast<std::size_t>(e)]);
        source_orig = std::move(next_orig);

        if (!used_target.empty()) {
            target = remove_edges(target, used_target, &survive);
            next_orig.clear();
            next_orig.reserve(survive.size());
            for (const EdgeId e : survive) next_orig.push_back(target_orig[static_cast<std::size_t>(e)]);
            target_orig = std::move(next_orig);
        }
    }

    if (diag) diag->sampling_failures = failures;
    result.score = result.n_paths > 0 ? p_sum / result.n_paths : 0.0;
    return result;
}

}  // namespace

NEWPScore newp(const GeoGraph& gt, const GeoGraph& pred, const PathParams& p,
               NEWPDiagnostics* recall_diag, NEWPDiagnostics* precision_diag) {
    DirectionResult recall, precision;
    // the two directions are independent; run them as parallel sections
#pragma omp parallel sections
    {
#pragma omp section
        recall = newp_direction(gt, pred, p, /*tag=*/0x5057524543ULL, recall_diag);
#pragma omp section
        precision = newp_direction(pred, gt, p, /*tag=*/0x5057505245ULL, precision_diag);
    }
    NEWPScore s;
    s.recall = recall.score;
    s.precision = precision.score;
    s.n_paths_gt = recall.n_paths;
    s.n_paths_pred = precision.n_paths;
    s.f1 = harmonic_mean(s.precision, s.recall);
    return s;
}

}  // namespace roadcmp
