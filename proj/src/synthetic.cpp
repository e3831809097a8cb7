#include "roadcmp/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "roadcmp/rng.hpp"

namespace roadcmp {

namespace {

// union-find over node slots
struct Dsu {
    std::vector<int> parent;
    explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[a] = b;
        return true;
    }
};

}  // namespace

GeoGraph make_city(std::uint64_t seed, const CityOptions& opt) {
    Rng rng = Rng::substream(seed, 0x43495459);
    const int cols = std::max(2, opt.cols);
    const int rows = std::max(2, opt.rows);

    std::vector<Vec2> pos(static_cast<std::size_t>(cols) * rows);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const double jx = rng.uniform(-opt.jitter, opt.jitter) * opt.spacing;
            const double jy = rng.uniform(-opt.jitter, opt.jitter) * opt.spacing;
            pos[static_cast<std::size_t>(r) * cols + c] =
                quantize64({c * opt.spacing + jx, r * opt.spacing + jy});
        }
    }

    std::vector<std::pair<int, int>> grid_edges;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const int v = r * cols + c;
            if (c + 1 < cols) grid_edges.emplace_back(v, v + 1);
            if (r + 1 < rows) grid_edges.emplace_back(v, v + cols);
        }
    }

    // drop a share of the edges while keeping the graph connected: protect a
    // random spanning tree, then drop from the rest
    std::vector<std::size_t> order(grid_edges.size());
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = order.size(); i-- > 1;) std::swap(order[i], order[rng.index(i + 1)]);

    Dsu dsu(cols * rows);
    std::vector<char> in_tree(grid_edges.size(), 0);
    for (const std::size_t e : order) {
        if (dsu.unite(grid_edges[e].first, grid_edges[e].second)) in_tree[e] = 1;
    }
    std::vector<char> keep(grid_edges.size(), 1);
    const int to_drop = static_cast<int>(std::round(opt.drop_fraction * grid_edges.size()));
    int dropped = 0;
    for (const std::size_t e : order) {
        if (dropped >= to_drop) break;
        if (in_tree[e]) continue;
        keep[e] = 0;
        ++dropped;
    }

    GraphBuilder b;
    for (std::size_t v = 0; v < pos.size(); ++v) b.add_node(static_cast<NodeId>(v), pos[v]);
    NodeId next_id = static_cast<NodeId>(pos.size());
    for (std::size_t e = 0; e < grid_edges.size(); ++e) {
        if (!keep[e]) continue;
        const auto [u, v] = grid_edges[e];
        if (rng.next_double() < opt.bend_fraction) {
            // gentle bow: midpoint pushed a little off the straight line
            const Vec2 a = pos[static_cast<std::size_t>(u)], bb = pos[static_cast<std::size_t>(v)];
            const Vec2 mid = lerp(a, bb, 0.5);
            const double bow = rng.uniform(-0.08, 0.08) * opt.spacing;
            const Vec2 bent = quantize64(mid + (bb - a).normalized().perp() * bow);
            b.add_node(next_id, bent);
            b.add_edge(static_cast<NodeId>(u), next_id);
            b.add_edge(next_id, static_cast<NodeId>(v));
            ++next_id;
        } else {
            b.add_edge(static_cast<NodeId>(u), static_cast<NodeId>(v));
        }
    }
    return b.build();
}

GeoGraph make_city_sized(std::uint64_t seed, int target_nodes, double spacing) {
    CityOptions opt;
    opt.spacing = spacing;
    // grid + bend nodes ~= cols*rows * (1 + bend_fraction * 1.76 * drop-adjusted)
    const double grid_nodes = target_nodes / 1.4;
    opt.cols = std::max(2, static_cast<int>(std::round(std::sqrt(grid_nodes * 1.1))));
    opt.rows = std::max(2, static_cast<int>(std::round(grid_nodes / opt.cols)));
    return make_city(seed, opt);
}

}  // namespace roadcmp
