#include "roadcmp/graph.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "roadcmp/errors.hpp"

namespace roadcmp {

Vec2 GraphLocation::position(const GeoGraph& g) const {
    if (kind == Kind::node) {
        const auto idx = g.index_of(node);
        if (!idx) throw std::invalid_argument("location refers to unknown node " + std::to_string(node));
        return g.pos(*idx);
    }
    return g.edge_point(edge, t);
}

BBox GeoGraph::bounds() const {
    BBox b;
    for (const auto& n : nodes_) b.expand(n.pos);
    return b;
}

std::vector<std::int32_t> GeoGraph::components() const {
    std::vector<std::int32_t> comp(nodes_.size(), -1);
    std::int32_t next = 0;
    std::vector<std::uint32_t> stack;
    for (std::size_t start = 0; start < nodes_.size(); ++start) {
        if (comp[start] >= 0) continue;
        comp[start] = next;
        stack.push_back(static_cast<std::uint32_t>(start));
        while (!stack.empty()) {
            const std::uint32_t v = stack.back();
            stack.pop_back();
            for (const auto& adj : neighbors(v)) {
                if (comp[adj.neighbor] < 0) {
                    comp[adj.neighbor] = next;
                    stack.push_back(adj.neighbor);
                }
            }
        }
        ++next;
    }
    return comp;
}

double GeoGraph::path_length(std::span<const std::uint32_t> nodes) const {
    if (nodes.size() < 2) return 0.0;
    // canonical accumulation order: from the end with the smaller node id
    const bool forward = id_of(nodes.front()) <= id_of(nodes.back());
    double sum = 0.0;
    if (forward) {
        for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
            sum += distance(pos(nodes[i]), pos(nodes[i + 1]));
    } else {
        for (std::size_t i = nodes.size(); i-- > 1;)
            sum += distance(pos(nodes[i]), pos(nodes[i - 1]));
    }
    return sum;
}

void GraphBuilder::reserve(std::size_t nodes, std::size_t edges) {
    nodes_.reserve(nodes);
    edges_.reserve(edges);
}

void GraphBuilder::add_node(NodeId id, Vec2 pos) { nodes_.push_back({id, pos}); }

void GraphBuilder::add_edge(NodeId a, NodeId b) { edges_.emplace_back(a, b); }

GeoGraph GraphBuilder::build(BuildStats* stats) const {
    BuildStats local;
    GeoGraph g;
    g.nodes_ = nodes_;
    g.id_to_index_.reserve(nodes_.size());
    for (std::size_t i = 0; i < g.nodes_.size(); ++i) {
        const NodeId id = g.nodes_[i].id;
        if (!g.id_to_index_.emplace(id, i).second)
            throw ValidationError("duplicate node id " + std::to_string(id));
        g.max_node_id_ = std::max(g.max_node_id_, id);
    }

    std::set<std::pair<NodeId, NodeId>> seen;
    g.edges_.reserve(edges_.size());
    for (const auto& [ia, ib] : edges_) {
        if (ia == ib) {
            ++local.self_loops;
            continue;
        }
        const NodeId lo = std::min(ia, ib), hi = std::max(ia, ib);
        auto ita = g.id_to_index_.find(lo);
        auto itb = g.id_to_index_.find(hi);
        if (ita == g.id_to_index_.end() || itb == g.id_to_index_.end())
            throw ValidationError("edge [" + std::to_string(ia) + "," + std::to_string(ib) +
                                  "] references a missing node");
        if (!seen.emplace(lo, hi).second) {
            ++local.duplicate_edges;
            continue;
        }
        const double len = distance(g.nodes_[ita->second].pos, g.nodes_[itb->second].pos);
        if (!(len > 0.0)) {
            ++local.zero_length_edges;
            continue;
        }
        g.edges_.push_back({static_cast<std::uint32_t>(ita->second),
                            static_cast<std::uint32_t>(itb->second), len});
        g.total_length_ += len;
    }

    // adjacency, sorted by (neighbor id, edge id)
    std::vector<std::vector<GeoGraph::AdjEntry>> adj(g.nodes_.size());
    for (std::size_t e = 0; e < g.edges_.size(); ++e) {
        const auto& ed = g.edges_[e];
        adj[ed.a].push_back({ed.b, static_cast<EdgeId>(e)});
        adj[ed.b].push_back({ed.a, static_cast<EdgeId>(e)});
    }
    g.adj_offsets_.assign(g.nodes_.size() + 1, 0);
    std::size_t total = 0;
    for (std::size_t v = 0; v < adj.size(); ++v) {
        auto& list = adj[v];
        std::sort(list.begin(), list.end(), [&g](const auto& x, const auto& y) {
            const NodeId nx = g.nodes_[x.neighbor].id, ny = g.nodes_[y.neighbor].id;
            return nx != ny ? nx < ny : x.edge < y.edge;
        });
        g.adj_offsets_[v] = total;
        total += list.size();
    }
    g.adj_offsets_[g.nodes_.size()] = total;
    g.adjacency_.reserve(total);
    for (auto& list : adj) g.adjacency_.insert(g.adjacency_.end(), list.begin(), list.end());
    for (std::size_t v = 0; v < adj.size(); ++v) {
        if (adj[v].empty()) g.isolated_.push_back(static_cast<std::uint32_t>(v));
    }

    if (stats) *stats = local;
    return g;
}

std::vector<Chain> extract_chains(const GeoGraph& g) {
    std::vector<Chain> chains;
    std::vector<char> edge_used(g.edge_count(), 0);

    auto walk = [&](std::uint32_t start, const GeoGraph::AdjEntry& first) {
        Chain c;
        c.nodes.push_back(start);
        std::uint32_t prev = start;
        std::uint32_t cur = first.neighbor;
        EdgeId via = first.edge;
        while (true) {
            edge_used[static_cast<std::size_t>(via)] = 1;
            c.edges.push_back(via);
            c.length += g.edge(via).length;
            c.nodes.push_back(cur);
            if (g.degree(cur) != 2 || cur == start) break;
            const auto nb = g.neighbors(cur);
            const auto& next = (nb[0].neighbor == prev && nb[0].edge == via) ? nb[1] : nb[0];
            prev = cur;
            via = next.edge;
            cur = next.neighbor;
        }
        return c;
    };

    // chains anchored at feature nodes (degree != 2), in node-index order
    for (std::size_t v = 0; v < g.node_count(); ++v) {
        if (g.degree(v) == 2) continue;
        for (const auto& adj : g.neighbors(v)) {
            if (edge_used[static_cast<std::size_t>(adj.edge)]) continue;
            chains.push_back(walk(static_cast<std::uint32_t>(v), adj));
        }
    }
    // remaining edges belong to pure degree-2 cycles
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        if (edge_used[e]) continue;
        const std::uint32_t v = g.edge(static_cast<EdgeId>(e)).a;
        for (const auto& adj : g.neighbors(v)) {
            if (adj.edge != static_cast<EdgeId>(e)) continue;
            Chain c = walk(v, adj);
            c.is_cycle = true;
            chains.push_back(c);
            break;
        }
    }
    return chains;
}

ArcTable::ArcTable(const GeoGraph& g) : g_(&g) {
    cumulative_.reserve(g.edge_count());
    for (const auto& e : g.edges()) {
        total_ += e.length;
        cumulative_.push_back(total_);
    }
}

GraphLocation ArcTable::sample(double u) const {
    if (empty()) throw std::domain_error("cannot sample a position on an empty graph");
    const double target = u * total_;
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
    const std::size_t e =
        std::min(static_cast<std::size_t>(it - cumulative_.begin()), cumulative_.size() - 1);
    const double before = e == 0 ? 0.0 : cumulative_[e - 1];
    const double t = std::clamp((target - before) / g_->edge(static_cast<EdgeId>(e)).length, 0.0, 1.0);
    return GraphLocation::on_edge(static_cast<EdgeId>(e), t);
}

}  // namespace roadcmp
