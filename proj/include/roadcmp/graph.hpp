#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "roadcmp/geo.hpp"

namespace roadcmp {

using NodeId = std::int64_t;
using EdgeId = std::int32_t;  // index into the edge array of one graph

class GeoGraph;

// A position on a graph: a node, or a point on an edge at parameter t.
struct GraphLocation {
    enum class Kind { node, on_edge };

    Kind kind = Kind::node;
    NodeId node = 0;
    EdgeId edge = -1;
    double t = 0.0;

    static GraphLocation at_node(NodeId id) { return {Kind::node, id, -1, 0.0}; }
    static GraphLocation on_edge(EdgeId e, double t) { return {Kind::on_edge, 0, e, t}; }

    bool is_node() const { return kind == Kind::node; }
    Vec2 position(const GeoGraph& g) const;
};

// Ordered node chain within one graph. Length is cached; it is always
// accumulated from the endpoint with the smaller node id so that a path and
// its reverse carry bit-identical lengths.
struct Path {
    std::vector<std::uint32_t> nodes;  // node indices into the owning graph
    double length = 0.0;

    std::size_t hops() const { return nodes.empty() ? 0 : nodes.size() - 1; }
};

// Undirected planar-embedded geometric graph. Nodes carry 2-D coordinates in
// meters, edges are straight segments. Immutable after construction; all
// operations that "modify" a graph return a new one.
class GeoGraph {
public:
    struct Node {
        NodeId id;
        Vec2 pos;
    };
    struct Edge {
        std::uint32_t a;  // node index, id_of(a) < id_of(b)
        std::uint32_t b;
        double length;
    };
    struct AdjEntry {
        std::uint32_t neighbor;
        EdgeId edge;
    };

    GeoGraph() = default;

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    bool empty() const { return edges_.empty(); }

    const Node& node(std::size_t idx) const { return nodes_[idx]; }
    const Edge& edge(EdgeId e) const { return edges_[static_cast<std::size_t>(e)]; }
    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<Edge>& edges() const { return edges_; }

    Vec2 pos(std::size_t idx) const { return nodes_[idx].pos; }
    NodeId id_of(std::size_t idx) const { return nodes_[idx].id; }
    std::optional<std::size_t> index_of(NodeId id) const {
        auto it = id_to_index_.find(id);
        if (it == id_to_index_.end()) return std::nullopt;
        return it->second;
    }

    // Neighbors sorted by (neighbor node id, edge id); deterministic iteration.
    std::span<const AdjEntry> neighbors(std::size_t idx) const {
        return {adjacency_.data() + adj_offsets_[idx],
                adj_offsets_[idx + 1] - adj_offsets_[idx]};
    }
    std::size_t degree(std::size_t idx) const {
        return adj_offsets_[idx + 1] - adj_offsets_[idx];
    }

    double total_length() const { return total_length_; }
    NodeId max_node_id() const { return max_node_id_; }
    BBox bounds() const;

    // degree-0 nodes; projection targets not covered by any edge
    const std::vector<std::uint32_t>& isolated_nodes() const { return isolated_; }

    Vec2 edge_point(EdgeId e, double t) const {
        const Edge& ed = edge(e);
        return lerp(nodes_[ed.a].pos, nodes_[ed.b].pos, t);
    }

    // Connected component id per node index (ids are 0..k-1 in order of the
    // smallest node index they contain).
    std::vector<std::int32_t> components() const;

    double path_length(std::span<const std::uint32_t> nodes) const;

private:
    friend class GraphBuilder;

    std::vector<Node> nodes_;
    std::vector<Edge> edges_;
    std::vector<AdjEntry> adjacency_;
    std::vector<std::size_t> adj_offsets_;
    std::vector<std::uint32_t> isolated_;
    std::unordered_map<NodeId, std::size_t> id_to_index_;
    double total_length_ = 0.0;
    NodeId max_node_id_ = -1;
};

// Counts of input anomalies dropped during construction.
struct BuildStats {
    int self_loops = 0;
    int duplicate_edges = 0;
    int zero_length_edges = 0;

    int total() const { return self_loops + duplicate_edges + zero_length_edges; }
};

class GraphBuilder {
public:
    void reserve(std::size_t nodes, std::size_t edges);
    void add_node(NodeId id, Vec2 pos);
    // Endpoints must refer to added nodes (checked in build()).
    void add_edge(NodeId a, NodeId b);

    // Validates and finalizes. Self-loops, duplicate edges and zero-length
    // edges are dropped and counted; a dangling endpoint throws.
    GeoGraph build(BuildStats* stats = nullptr) const;

private:
    std::vector<GeoGraph::Node> nodes_;
    std::vector<std::pair<NodeId, NodeId>> edges_;
};

// Maximal runs of edges through degree-2 nodes. Ends are nodes of degree != 2
// ("features" in metric terms); a pure cycle of degree-2 nodes forms a chain
// with is_cycle set and ends equal.
struct Chain {
    std::vector<std::uint32_t> nodes;  // ordered node indices, ends included
    std::vector<EdgeId> edges;
    double length = 0.0;
    bool is_cycle = false;
};

std::vector<Chain> extract_chains(const GeoGraph& g);

// Cumulative-length table for sampling positions uniformly by arc length.
class ArcTable {
public:
    explicit ArcTable(const GeoGraph& g);
    bool empty() const { return total_ <= 0.0; }
    double total() const { return total_; }
    // u in [0, 1) -> location on the graph
    GraphLocation sample(double u) const;

private:
    const GeoGraph* g_;
    std::vector<double> cumulative_;
    double total_ = 0.0;
};

}  // namespace roadcmp
