#include "roadcmp/graph_ops.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <unordered_set>

namespace roadcmp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct HeapEntry {
    double dist;
    std::uint32_t node;
    bool operator>(const HeapEntry& o) const {
        return dist != o.dist ? dist > o.dist : node > o.node;
    }
};

using MinHeap = std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<HeapEntry>>;

// Dijkstra from a set of seed offers. Stops expanding past `cutoff` when
// cutoff >= 0. Fills `pred_edge` when provided.
void dijkstra(const GeoGraph& g, const std::vector<std::pair<std::uint32_t, double>>& seeds,
              std::vector<double>& dist, std::vector<EdgeId>* pred_edge, double cutoff = -1.0) {
    dist.assign(g.node_count(), kInf);
    if (pred_edge) pred_edge->assign(g.node_count(), -1);
    MinHeap heap;
    for (const auto& [v, d] : seeds) {
        if (d < dist[v]) {
            dist[v] = d;
            heap.push({d, v});
        }
    }
    while (!heap.empty()) {
        const auto [d, v] = heap.top();
        heap.pop();
        if (d > dist[v]) continue;
        if (cutoff >= 0.0 && d > cutoff) break;
        for (const auto& adj : g.neighbors(v)) {
            const double nd = d + g.edge(adj.edge).length;
            if (nd < dist[adj.neighbor]) {
                dist[adj.neighbor] = nd;
                if (pred_edge) (*pred_edge)[adj.neighbor] = adj.edge;
                heap.push({nd, adj.neighbor});
            }
        }
    }
}

std::vector<std::pair<std::uint32_t, double>> location_seeds(const GeoGraph& g,
                                                             const GraphLocation& loc) {
    if (loc.is_node()) {
        const auto idx = g.index_of(loc.node);
        if (!idx) throw std::invalid_argument("unknown node id " + std::to_string(loc.node));
        return {{static_cast<std::uint32_t>(*idx), 0.0}};
    }
    if (loc.edge < 0 || static_cast<std::size_t>(loc.edge) >= g.edge_count())
        throw std::invalid_argument("unknown edge id " + std::to_string(loc.edge));
    const auto& e = g.edge(loc.edge);
    return {{e.a, loc.t * e.length}, {e.b, (1.0 - loc.t) * e.length}};
}

}  // namespace

GeoGraph densify(const GeoGraph& g, double spacing) {
    if (!(spacing > 0.0)) throw std::invalid_argument("spacing must be positive");
    GraphBuilder b;
    for (const auto& n : g.nodes()) b.add_node(n.id, n.pos);
    NodeId next_id = g.max_node_id() + 1;
    for (std::size_t ei = 0; ei < g.edge_count(); ++ei) {
        const auto& e = g.edge(static_cast<EdgeId>(ei));
        const int parts = std::max(1, static_cast<int>(std::ceil(e.length / spacing - 1e-12)));
        if (parts == 1) {
            b.add_edge(g.id_of(e.a), g.id_of(e.b));
            continue;
        }
        NodeId prev = g.id_of(e.a);
        for (int k = 1; k < parts; ++k) {
            const Vec2 p = lerp(g.pos(e.a), g.pos(e.b), static_cast<double>(k) / parts);
            b.add_node(next_id, p);
            b.add_edge(prev, next_id);
            prev = next_id++;
        }
        b.add_edge(prev, g.id_of(e.b));
    }
    return b.build();
}

std::optional<Path> shortest_path(const GeoGraph& g, NodeId a, NodeId b) {
    const auto ia = g.index_of(a);
    const auto ib = g.index_of(b);
    if (!ia || !ib) throw std::invalid_argument("unknown node id");
    if (a == b) return Path{{static_cast<std::uint32_t>(*ia)}, 0.0};

    std::vector<double> da, db;
    dijkstra(g, {{static_cast<std::uint32_t>(*ia), 0.0}}, da, nullptr);
    if (da[*ib] == kInf) return std::nullopt;
    dijkstra(g, {{static_cast<std::uint32_t>(*ib), 0.0}}, db, nullptr);

    const double total = da[*ib];
    const double eps = 1e-9 * std::max(1.0, total);

    // Walk forward from a, always taking the smallest-id neighbor that still
    // completes a shortest path; this realizes the lexicographically smallest
    // node-id sequence among all shortest paths.
    Path path;
    path.nodes.push_back(static_cast<std::uint32_t>(*ia));
    std::uint32_t v = static_cast<std::uint32_t>(*ia);
    double acc = 0.0;
    std::size_t guard = 0;
    while (v != static_cast<std::uint32_t>(*ib)) {
        if (++guard > g.node_count()) throw std::logic_error("shortest_path walk failed to terminate");
        const GeoGraph::AdjEntry* chosen = nullptr;
        for (const auto& adj : g.neighbors(v)) {
            if (db[adj.neighbor] >= db[v]) continue;
            if (std::abs(acc + g.edge(adj.edge).length + db[adj.neighbor] - total) <= eps) {
                chosen = &adj;
                break;  // neighbors are sorted by node id
            }
        }
        if (!chosen) {
            // numeric drift: follow the steepest descent of db instead
            double best = kInf;
            for (const auto& adj : g.neighbors(v)) {
                const double r = db[adj.neighbor] + g.edge(adj.edge).length;
                if (db[adj.neighbor] < db[v] && r < best) {
                    best = r;
                    chosen = &adj;
                }
            }
        }
        if (!chosen) throw std::logic_error("shortest_path walk lost the target");
        acc += g.edge(chosen->edge).length;
        v = chosen->neighbor;
        path.nodes.push_back(v);
    }
    path.length = g.path_length(path.nodes);
    return path;
}

std::optional<LocationRoute> route_between(const GeoGraph& g, const GraphLocation& from,
                                           const GraphLocation& to, double cutoff) {
    // direct travel along a shared edge
    std::optional<LocationRoute> direct;
    if (!from.is_node() && !to.is_node() && from.edge == to.edge) {
        direct = LocationRoute{std::abs(from.t - to.t) * g.edge(from.edge).length, {from.edge}};
    }

    std::vector<double> dist;
    std::vector<EdgeId> pred;
    dijkstra(g, location_seeds(g, from), dist, &pred, cutoff);

    // best terminal: distance to `to` through each of its anchor nodes
    double best = kInf;
    std::uint32_t best_node = 0;
    double tail = 0.0;
    for (const auto& [v, offset] : location_seeds(g, to)) {
        const double d = dist[v] + offset;
        if (d < best) {
            best = d;
            best_node = v;
            tail = offset;
        }
    }
    (void)tail;
    if (direct && direct->dist <= best) {
        if (cutoff >= 0.0 && direct->dist > cutoff) return std::nullopt;
        return direct;
    }
    if (best == kInf || (cutoff >= 0.0 && best > cutoff)) return std::nullopt;

    LocationRoute r;
    r.dist = best;
    if (!to.is_node()) r.edges.push_back(to.edge);
    std::uint32_t v = best_node;
    while (pred[v] >= 0) {
        const EdgeId e = pred[v];
        r.edges.push_back(e);
        const auto& ed = g.edge(e);
        v = (ed.a == v) ? ed.b : ed.a;
    }
    if (!from.is_node()) r.edges.push_back(from.edge);
    std::sort(r.edges.begin(), r.edges.end());
    r.edges.erase(std::unique(r.edges.begin(), r.edges.end()), r.edges.end());
    return r;
}

double distance_between(const GeoGraph& g, const GraphLocation& from, const GraphLocation& to,
                        double cutoff) {
    auto r = route_between(g, from, to, cutoff);
    return r ? r->dist : kInf;
}

Projection project_point(const GeoGraph& g, const SegmentGrid& index, const Vec2& p) {
    if (g.node_count() == 0) throw std::domain_error("cannot project onto an empty graph");

    // nodes on edges are dominated by their edges, so only degree-0 nodes
    // can beat the segment search
    std::optional<Projection> node_best;
    for (const std::uint32_t v : g.isolated_nodes()) {
        const double d = distance(g.pos(v), p);
        if (!node_best || d < node_best->dist) node_best = {GraphLocation::at_node(g.id_of(v)), d};
    }

    if (g.edge_count() == 0) {
        if (!node_best) throw std::domain_error("cannot project onto an empty graph");
        return *node_best;
    }
    const auto hit = index.nearest(p);
    if (node_best && node_best->dist < hit.dist) return *node_best;
    if (hit.t <= 0.0) return {GraphLocation::at_node(g.id_of(g.edge(hit.edge).a)), hit.dist};
    if (hit.t >= 1.0) return {GraphLocation::at_node(g.id_of(g.edge(hit.edge).b)), hit.dist};
    return {GraphLocation::on_edge(hit.edge, hit.t), hit.dist};
}

Projection project_point(const GeoGraph& g, const Vec2& p) {
    if (g.node_count() == 0) throw std::domain_error("cannot project onto an empty graph");
    const double avg_edge =
        g.edge_count() > 0 ? std::max(1.0, g.total_length() / static_cast<double>(g.edge_count()))
                           : 1.0;
    SegmentGrid grid(g, avg_edge);
    return project_point(g, grid, p);
}

std::vector<Vec2> crop_by_travel(const GeoGraph& g, const GraphLocation& start, double budget,
                                 double interval) {
    if (!(budget > 0.0) || !(interval > 0.0))
        throw std::invalid_argument("budget and interval must be positive");

    std::vector<double> dist;
    dijkstra(g, location_seeds(g, start), dist, nullptr, budget);

    std::vector<Vec2> points;
    points.push_back(start.position(g));

    const double start_offset = start.is_node() ? 0.0 : start.t * g.edge(start.edge).length;
    const int k_max = static_cast<int>(std::floor(budget / interval + 1e-12));

    auto emit = [&](EdgeId e, double s) {
        const auto& ed = g.edge(e);
        if (s <= 1e-9 * std::max(1.0, ed.length)) {
            points.push_back(g.pos(ed.a));
        } else if (s >= ed.length - 1e-9 * std::max(1.0, ed.length)) {
            points.push_back(g.pos(ed.b));
        } else {
            points.push_back(lerp(g.pos(ed.a), g.pos(ed.b), s / ed.length));
        }
    };

    for (std::size_t ei = 0; ei < g.edge_count(); ++ei) {
        const EdgeId e = static_cast<EdgeId>(ei);
        const auto& ed = g.edge(e);
        const double du = dist[ed.a], dv = dist[ed.b];
        const bool is_start_edge = !start.is_node() && start.edge == e;
        if (du == kInf && dv == kInf && !is_start_edge) continue;

        // travel-distance field along the edge: lower envelope of the waves
        // entering from each end plus, on the start edge, the start itself
        auto field = [&](double s) {
            double d = kInf;
            if (du != kInf) d = std::min(d, du + s);
            if (dv != kInf) d = std::min(d, dv + (ed.length - s));
            if (is_start_edge) d = std::min(d, std::abs(s - start_offset));
            return d;
        };

        for (int k = 0; k <= k_max; ++k) {
            const double target = k * interval;
            const double eps = 1e-9 * std::max(1.0, target);
            double candidates[4];
            int n = 0;
            if (du != kInf) candidates[n++] = target - du;
            if (dv != kInf) candidates[n++] = ed.length - (target - dv);
            if (is_start_edge) {
                candidates[n++] = start_offset - target;
                candidates[n++] = start_offset + target;
            }
            for (int c = 0; c < n; ++c) {
                double s = candidates[c];
                if (s < -eps || s > ed.length + eps) continue;
                s = std::clamp(s, 0.0, ed.length);
                if (std::abs(field(s) - target) <= eps) emit(e, s);
            }
        }
    }

    // one point per geometric position; duplicates come from the same
    // position derived via different edges, so they agree to ~1e-9
    std::sort(points.begin(), points.end(), [](const Vec2& a, const Vec2& b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    std::vector<Vec2> out;
    for (const auto& p : points) {
        bool dup = false;
        for (std::size_t j = out.size(); j-- > 0 && out[j].x >= p.x - 1e-7;) {
            if (std::abs(out[j].y - p.y) <= 1e-7) {
                dup = true;
                break;
            }
        }
        if (!dup) out.push_back(p);
    }
    return out;
}

GeoGraph remove_edges(const GeoGraph& g, const std::set<EdgeId>& edges,
                      std::vector<EdgeId>* surviving) {
    for (const EdgeId e : edges) {
        if (e < 0 || static_cast<std::size_t>(e) >= g.edge_count())
            throw std::invalid_argument("unknown edge id " + std::to_string(e));
    }
    std::vector<std::size_t> new_degree(g.node_count(), 0);
    for (std::size_t ei = 0; ei < g.edge_count(); ++ei) {
        if (edges.count(static_cast<EdgeId>(ei))) continue;
        const auto& ed = g.edge(static_cast<EdgeId>(ei));
        ++new_degree[ed.a];
        ++new_degree[ed.b];
    }
    GraphBuilder b;
    for (std::size_t v = 0; v < g.node_count(); ++v) {
        // drop only nodes this removal isolates; pre-existing isolated nodes stay
        if (new_degree[v] == 0 && g.degree(v) > 0) continue;
        b.add_node(g.id_of(v), g.pos(v));
    }
    if (surviving) surviving->clear();
    for (std::size_t ei = 0; ei < g.edge_count(); ++ei) {
        if (edges.count(static_cast<EdgeId>(ei))) continue;
        const auto& ed = g.edge(static_cast<EdgeId>(ei));
        b.add_edge(g.id_of(ed.a), g.id_of(ed.b));
        if (surviving) surviving->push_back(static_cast<EdgeId>(ei));
    }
    return b.build();
}

}  // namespace roadcmp
