#include "roadcmp/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "roadcmp/graph_ops.hpp"
#include "roadcmp/rng.hpp"

namespace roadcmp {

const char* to_string(PerturbKind k) {
    switch (k) {
        case PerturbKind::interruptions: return "interruptions";
        case PerturbKind::overconnections: return "overconnections";
        case PerturbKind::node_noise: return "node_noise";
        case PerturbKind::doubled_pred: return "doubled_pred";
        case PerturbKind::doubled_gt: return "doubled_gt";
        case PerturbKind::far_false_positives: return "far_false_positives";
    }
    return "?";
}

PerturbKind perturb_kind_from_string(const std::string& s) {
    for (const auto k : {PerturbKind::interruptions, PerturbKind::overconnections,
                         PerturbKind::node_noise, PerturbKind::doubled_pred,
                         PerturbKind::doubled_gt, PerturbKind::far_false_positives}) {
        if (s == to_string(k)) return k;
    }
    throw std::invalid_argument("unknown perturbation kind: " + s);
}

namespace {

// Mutable node/edge soup used by the injectors; rebuilt into a GeoGraph
// after each surgery step.
struct Soup {
    std::map<NodeId, Vec2> nodes;
    std::vector<std::pair<NodeId, NodeId>> edges;
    NodeId next_id = 0;

    explicit Soup(const GeoGraph& g) {
        for (const auto& n : g.nodes()) nodes[n.id] = n.pos;
        for (const auto& e : g.edges()) edges.emplace_back(g.id_of(e.a), g.id_of(e.b));
        next_id = g.max_node_id() + 1;
    }

    NodeId add_node(Vec2 pos) {
        const NodeId id = next_id++;
        nodes[id] = pos;
        return id;
    }

    GeoGraph build(bool drop_isolated) const {
        std::set<NodeId> incident;
        if (drop_isolated) {
            for (const auto& [a, b] : edges) {
                incident.insert(a);
                incident.insert(b);
            }
        }
        GraphBuilder b;
        for (const auto& [id, pos] : nodes) {
            if (drop_isolated && !incident.count(id)) continue;
            b.add_node(id, pos);
        }
        for (const auto& [a, bb] : edges) b.add_edge(a, bb);
        return b.build();
    }
};

// Chain geometry as a polyline with cumulative arc positions.
struct ChainLine {
    std::vector<NodeId> ids;
    std::vector<Vec2> pts;
    std::vector<double> arc;  // arc[i] = distance from chain start to pts[i]
    double length = 0.0;
    bool is_cycle = false;

    ChainLine(const GeoGraph& g, const Chain& c) {
        ids.reserve(c.nodes.size());
        pts.reserve(c.nodes.size());
        arc.reserve(c.nodes.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < c.nodes.size(); ++i) {
            ids.push_back(g.id_of(c.nodes[i]));
            pts.push_back(g.pos(c.nodes[i]));
            if (i > 0) acc += distance(pts[i - 1], pts[i]);
            arc.push_back(acc);
        }
        length = acc;
        is_cycle = c.is_cycle;
    }

    Vec2 at(double s) const {
        const auto it = std::upper_bound(arc.begin(), arc.end(), s);
        std::size_t i = std::min(static_cast<std::size_t>(it - arc.begin()), arc.size() - 1);
        if (i == 0) i = 1;
        const double seg = arc[i] - arc[i - 1];
        const double t = seg > 0.0 ? std::clamp((s - arc[i - 1]) / seg, 0.0, 1.0) : 0.0;
        return lerp(pts[i - 1], pts[i], t);
    }
};

}  // namespace

InjectResult inject_interruptions(const GeoGraph& g, int n, double gap, std::uint64_t seed) {
    if (!(gap > 0.0)) throw std::invalid_argument("gap must be positive");
    Rng rng = Rng::substream(seed, 0x494e5452);
    GeoGraph cur = g;
    int applied = 0;

    for (int k = 0; k < n; ++k) {
        const auto chains = extract_chains(cur);
        // eligible stretch per chain: at least 3*gap from both end features
        std::vector<std::pair<std::size_t, double>> windows;  // chain idx, window length
        double total = 0.0;
        for (std::size_t ci = 0; ci < chains.size(); ++ci) {
            const double margin = chains[ci].is_cycle ? 0.5 * gap : 3.0 * gap;
            const double w = chains[ci].length - 2.0 * margin;
            if (w > 1e-9) {
                windows.emplace_back(ci, w);
                total += w;
            }
        }
        if (total <= 0.0) break;

        double u = rng.next_double() * total;
        std::size_t pick = windows.back().first;
        double offset_in_window = 0.0;
        for (const auto& [ci, w] : windows) {
            if (u < w) {
                pick = ci;
                offset_in_window = u;
                break;
            }
            u -= w;
        }
        const Chain& chain = chains[pick];
        const double margin = chain.is_cycle ? 0.5 * gap : 3.0 * gap;
        const double center = margin + offset_in_window;
        const double a = center - 0.5 * gap;
        const double b = center + 0.5 * gap;

        const ChainLine line(cur, chain);
        Soup soup(cur);

        // drop the chain's edges and its interior nodes inside the window
        std::set<std::pair<NodeId, NodeId>> chain_edges;
        for (std::size_t i = 0; i + 1 < line.ids.size(); ++i) {
            chain_edges.insert({std::min(line.ids[i], line.ids[i + 1]),
                                std::max(line.ids[i], line.ids[i + 1])});
        }
        std::erase_if(soup.edges, [&](const auto& e) {
            return chain_edges.count({std::min(e.first, e.second), std::max(e.first, e.second)}) > 0;
        });
        for (std::size_t i = 0; i < line.ids.size(); ++i) {
            const bool interior = chain.is_cycle ? i + 1 < line.ids.size() : (i > 0 && i + 1 < line.ids.size());
            if (interior && line.arc[i] > a && line.arc[i] < b) soup.nodes.erase(line.ids[i]);
        }

        // stitch the two kept pieces back, with fresh endpoint nodes at the cut
        auto emit_piece = [&](double from, double to) {
            std::vector<NodeId> run;
            if (to - from <= 1e-9) return;
            run.push_back(from == 0.0 ? line.ids.front() : soup.add_node(quantize64(line.at(from))));
            for (std::size_t i = 0; i < line.ids.size(); ++i) {
                if (line.arc[i] > from + 1e-9 && line.arc[i] < to - 1e-9) run.push_back(line.ids[i]);
            }
            run.push_back(to == line.length ? line.ids.back() : soup.add_node(quantize64(line.at(to))));
            for (std::size_t i = 0; i + 1 < run.size(); ++i) soup.edges.emplace_back(run[i], run[i + 1]);
        };
        emit_piece(0.0, a);
        emit_piece(b, line.length);

        cur = soup.build(/*drop_isolated=*/true);
        ++applied;
    }
    return {cur, static_cast<double>(applied)};
}

InjectResult inject_overconnections(const GeoGraph& g, int n, double r_min, double r_max,
                                    std::uint64_t seed) {
    if (!(r_min > 0.0) || !(r_max > r_min)) throw std::invalid_argument("need 0 < r_min < r_max");
    Rng rng = Rng::substream(seed, 0x4f564552);
    GeoGraph cur = g;
    int applied = 0;
    long long attempts = 200LL * n + 50;

    while (applied < n && attempts-- > 0 && cur.edge_count() > 0) {
        const ArcTable arcs(cur);
        const GraphLocation la = arcs.sample(rng.next_double());
        const GraphLocation lb = arcs.sample(rng.next_double());
        const Vec2 pa = la.position(cur), pb = lb.position(cur);
        const double sep = distance(pa, pb);
        if (sep < r_min || sep > r_max) continue;
        if (la.edge == lb.edge) continue;
        // only genuine shortcuts: skip pairs whose existing route is already
        // within 25 percent of the straight line
        if (distance_between(cur, la, lb, 1.25 * sep) < 1.25 * sep) continue;

        Soup soup(cur);
        auto anchor = [&](const GraphLocation& loc, Vec2 pos) {
            const auto& e = cur.edge(loc.edge);
            if (loc.t * e.length < 1e-9) return cur.id_of(e.a);
            if ((1.0 - loc.t) * e.length < 1e-9) return cur.id_of(e.b);
            const NodeId id = soup.add_node(quantize64(pos));
            const NodeId na = cur.id_of(e.a), nb = cur.id_of(e.b);
            std::erase_if(soup.edges, [&](const auto& ed) {
                return (ed.first == na && ed.second == nb) || (ed.first == nb && ed.second == na);
            });
            soup.edges.emplace_back(na, id);
            soup.edges.emplace_back(id, nb);
            return id;
        };
        const NodeId ia = anchor(la, pa);
        const NodeId ib = anchor(lb, pb);
        if (ia == ib) continue;
        soup.edges.emplace_back(ia, ib);
        cur = soup.build(false);
        ++applied;
    }
    return {cur, static_cast<double>(applied)};
}

GeoGraph inject_node_noise(const GeoGraph& g, double sigma, std::uint64_t seed) {
    if (sigma < 0.0) throw std::invalid_argument("sigma must be >= 0");
    if (sigma == 0.0) return g;
    Rng rng = Rng::substream(seed, 0x4e4f4953);
    GraphBuilder b;
    for (const auto& n : g.nodes()) {
        const double dx = quantize64(rng.normal(0.0, sigma));
        const double dy = quantize64(rng.normal(0.0, sigma));
        b.add_node(n.id, {n.pos.x + dx, n.pos.y + dy});
    }
    for (const auto& e : g.edges()) b.add_edge(g.id_of(e.a), g.id_of(e.b));
    return b.build();
}

InjectResult inject_doubled_roads(const GeoGraph& g, int n, double offset, std::uint64_t seed) {
    if (!(offset > 0.0)) throw std::invalid_argument("offset must be positive");
    Rng rng = Rng::substream(seed, 0x44424c44);
    const auto chains = extract_chains(g);

    std::vector<std::size_t> candidates;
    double total = 0.0;
    for (std::size_t ci = 0; ci < chains.size(); ++ci) {
        if (!chains[ci].is_cycle && chains[ci].length > 0.0) {
            candidates.push_back(ci);
            total += chains[ci].length;
        }
    }

    Soup soup(g);
    std::vector<char> used(chains.size(), 0);
    int applied = 0;
    for (int k = 0; k < n && total > 0.0; ++k) {
        // pick a chain by length, without replacement
        double u = rng.next_double() * total;
        std::size_t pick = SIZE_MAX;
        for (const std::size_t ci : candidates) {
            if (used[ci]) continue;
            if (u < chains[ci].length) {
                pick = ci;
                break;
            }
            u -= chains[ci].length;
        }
        if (pick == SIZE_MAX) break;
        used[pick] = 1;
        total -= chains[pick].length;

        const ChainLine line(g, chains[pick]);
        const double side = rng.next_double() < 0.5 ? 1.0 : -1.0;

        // lateral copy: shift every vertex along the local normal
        std::vector<NodeId> dup;
        dup.reserve(line.pts.size());
        for (std::size_t i = 0; i < line.pts.size(); ++i) {
            const Vec2 before = line.pts[i > 0 ? i - 1 : 0];
            const Vec2 after = line.pts[std::min(i + 1, line.pts.size() - 1)];
            const Vec2 dir = (after - before).normalized();
            dup.push_back(soup.add_node(quantize64(line.pts[i] + dir.perp() * (side * offset))));
        }
        for (std::size_t i = 0; i + 1 < dup.size(); ++i) soup.edges.emplace_back(dup[i], dup[i + 1]);
        soup.edges.emplace_back(line.ids.front(), dup.front());
        soup.edges.emplace_back(line.ids.back(), dup.back());
        ++applied;
    }
    return {soup.build(false), static_cast<double>(applied)};
}

InjectResult remove_far_regions(const GeoGraph& g, double fraction, double disk_radius,
                                std::uint64_t seed) {
    if (fraction < 0.0 || fraction > 1.0) throw std::invalid_argument("fraction must be in [0, 1]");
    if (!(disk_radius > 0.0)) throw std::invalid_argument("disk radius must be positive");
    if (fraction == 0.0) return {g, 0.0};

    Rng rng = Rng::substream(seed, 0x46415252);
    GeoGraph cur = g;
    const double original = g.total_length();
    const double target = fraction * original;
    long long guard = 4 * static_cast<long long>(original / disk_radius) + 1000;

    while (original - cur.total_length() < target - 1e-9 && cur.edge_count() > 0 && guard-- > 0) {
        const ArcTable arcs(cur);
        const Vec2 c = arcs.sample(rng.next_double()).position(cur);
        const double r2 = disk_radius * disk_radius;

        GraphBuilder b;
        std::set<NodeId> kept;
        for (const auto& node : cur.nodes()) {
            if ((node.pos - c).squared_norm() >= r2) kept.insert(node.id);
        }
        NodeId next_id = cur.max_node_id() + 1;
        std::vector<std::pair<NodeId, NodeId>> new_edges;
        std::vector<std::pair<NodeId, Vec2>> new_nodes;

        for (const auto& e : cur.edges()) {
            const Vec2 a = cur.pos(e.a), bb = cur.pos(e.b);
            const NodeId ia = cur.id_of(e.a), ib = cur.id_of(e.b);
            // segment-circle intersection in parameter space
            const Vec2 d = bb - a;
            const Vec2 f = a - c;
            const double qa = d.squared_norm();
            const double qb = 2.0 * f.dot(d);
            const double qc = f.squared_norm() - r2;
            const double disc = qb * qb - 4.0 * qa * qc;
            const bool a_in = qc < 0.0;
            const bool b_in = (bb - c).squared_norm() < r2;
            if (disc <= 0.0 || qa <= 0.0) {
                if (!a_in) new_edges.emplace_back(ia, ib);  // fully outside
                continue;
            }
            const double t1 = std::clamp((-qb - std::sqrt(disc)) / (2.0 * qa), 0.0, 1.0);
            const double t2 = std::clamp((-qb + std::sqrt(disc)) / (2.0 * qa), 0.0, 1.0);
            if (t1 >= t2) {  // grazing or disk beyond the segment
                if (!a_in) new_edges.emplace_back(ia, ib);
                continue;
            }
            if (!a_in && t1 > 0.0) {
                const NodeId cut = next_id++;
                new_nodes.emplace_back(cut, quantize64(lerp(a, bb, t1)));
                new_edges.emplace_back(ia, cut);
            }
            if (!b_in && t2 < 1.0) {
                const NodeId cut = next_id++;
                new_nodes.emplace_back(cut, quantize64(lerp(a, bb, t2)));
                new_edges.emplace_back(cut, ib);
            }
        }

        std::set<NodeId> incident;
        for (const auto& [x, y] : new_edges) {
            incident.insert(x);
            incident.insert(y);
        }
        for (const auto& node : cur.nodes()) {
            if (kept.count(node.id) && incident.count(node.id)) b.add_node(node.id, node.pos);
        }
        for (const auto& [id, pos] : new_nodes) b.add_node(id, pos);
        for (const auto& [x, y] : new_edges) b.add_edge(x, y);
        cur = b.build();
    }
    const double removed = original > 0.0 ? (original - cur.total_length()) / original : 0.0;
    return {cur, removed};
}

PerturbedPair make_pair(const GeoGraph& g, const PerturbationSpec& spec,
                        const PerturbKnobs& knobs) {
    if (spec.severity < 0.0) throw std::invalid_argument("severity must be >= 0");
    if (spec.severity == 0.0) return {g, g, 0.0};

    const int count = static_cast<int>(std::llround(spec.severity));
    switch (spec.kind) {
        case PerturbKind::interruptions: {
            auto r = inject_interruptions(g, count, knobs.gap, spec.seed);
            return {g, std::move(r.graph), r.achieved};
        }
        case PerturbKind::overconnections: {
            auto r = inject_overconnections(g, count, knobs.r_min, knobs.r_max, spec.seed);
            return {g, std::move(r.graph), r.achieved};
        }
        case PerturbKind::node_noise:
            return {g, inject_node_noise(g, spec.severity, spec.seed), spec.severity};
        case PerturbKind::doubled_pred: {
            auto r = inject_doubled_roads(g, count, knobs.offset, spec.seed);
            return {g, std::move(r.graph), r.achieved};
        }
        case PerturbKind::doubled_gt: {
            auto r = inject_doubled_roads(g, count, knobs.offset, spec.seed);
            return {std::move(r.graph), g, r.achieved};
        }
        case PerturbKind::far_false_positives: {
            auto r = remove_far_regions(g, spec.severity, knobs.disk_radius, spec.seed);
            return {std::move(r.graph), g, r.achieved};
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace roadcmp
