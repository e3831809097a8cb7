#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "roadcmp/errors.hpp"
#include "roadcmp/graph_ops.hpp"
#include "roadcmp/reference.hpp"
#include "roadcmp/rng.hpp"
#include "roadcmp/spatial_index.hpp"
#include "roadcmp/synthetic.hpp"
#include "support/test_util.hpp"

using namespace roadcmp;
using testutil::make_graph;
using testutil::make_polyline;

namespace {

GeoGraph random_graph(std::uint64_t seed, int n_nodes, double p_edge) {
    Rng rng(seed);
    GraphBuilder b;
    for (int i = 0; i < n_nodes; ++i)
        b.add_node(i, {rng.uniform(0.0, 100.0), rng.uniform(0.0, 100.0)});
    for (int i = 0; i < n_nodes; ++i) {
        for (int j = i + 1; j < n_nodes; ++j) {
            if (rng.next_double() < p_edge) b.add_edge(i, j);
        }
    }
    return b.build();
}

}  // namespace

TEST_CASE("builder enforces the graph invariants") {
    BuildStats stats;
    GraphBuilder b;
    b.add_node(0, {0, 0});
    b.add_node(1, {10, 0});
    b.add_edge(0, 1);
    b.add_edge(0, 0);  // self-loop
    b.add_edge(1, 0);  // duplicate (unordered)
    const GeoGraph g = b.build(&stats);
    CHECK(g.node_count() == 2);
    CHECK(g.edge_count() == 1);
    CHECK(stats.self_loops == 1);
    CHECK(stats.duplicate_edges == 1);

    GraphBuilder bad;
    bad.add_node(0, {0, 0});
    bad.add_edge(0, 7);
    CHECK_THROWS_AS(bad.build(), ValidationError);
}

TEST_CASE("densify splits a length-10 edge at spacing 3 into four equal parts") {
    const GeoGraph g = make_graph({{0, 0, 0}, {1, 10, 0}}, {{0, 1}});
    const GeoGraph d = densify(g, 3.0);
    CHECK(d.node_count() == 5);
    CHECK(d.edge_count() == 4);
    for (const auto& e : d.edges()) CHECK(testutil::near(e.length, 2.5));
    // original nodes retained, inserted nodes have degree 2
    CHECK(d.index_of(0).has_value());
    CHECK(d.index_of(1).has_value());
    for (std::size_t v = 0; v < d.node_count(); ++v) {
        if (d.id_of(v) > 1) CHECK(d.degree(v) == 2);
    }
}

TEST_CASE("densify keeps short edges untouched") {
    const GeoGraph g = make_graph({{0, 0, 0}, {1, 2, 0}}, {{0, 1}});
    const GeoGraph d = densify(g, 3.0);
    CHECK(d.node_count() == 2);
    CHECK(d.edge_count() == 1);
}

TEST_CASE("densify preserves total length and geometry on random graphs") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const GeoGraph g = random_graph(seed, 12, 0.25);
        const GeoGraph d = densify(g, 4.0);
        CHECK(std::abs(d.total_length() - g.total_length()) <=
              1e-9 * std::max(1.0, g.total_length()));
        for (const auto& e : d.edges()) CHECK(e.length <= 4.0 + 1e-9);
        // merging the degree-2 chains back reproduces the original lengths
        double merged = 0.0;
        for (const auto& c : extract_chains(d)) merged += c.length;
        CHECK(std::abs(merged - g.total_length()) <= 1e-9 * std::max(1.0, g.total_length()));
    }
}

TEST_CASE("shortest_path prefers the direct edge of a 3-4-5 triangle") {
    const GeoGraph g = make_graph({{0, 0, 0}, {1, 4, 0}, {2, 0, 3}}, {{0, 1}, {0, 2}, {1, 2}});
    // hypotenuse endpoints are 1 (4,0) and 2 (0,3); direct edge length 5
    const auto p = shortest_path(g, 1, 2);
    REQUIRE(p.has_value());
    CHECK(p->nodes.size() == 2);
    CHECK(testutil::near(p->length, 5.0));
}

TEST_CASE("shortest_path of a node to itself is the trivial path") {
    const GeoGraph g = make_graph({{0, 0, 0}, {1, 10, 0}}, {{0, 1}});
    const auto p = shortest_path(g, 0, 0);
    REQUIRE(p.has_value());
    CHECK(p->nodes.size() == 1);
    CHECK(p->length == 0.0);
}

TEST_CASE("shortest_path returns nothing across components and throws on bad ids") {
    const GeoGraph g = make_graph({{0, 0, 0}, {1, 1, 0}, {2, 5, 5}, {3, 6, 5}},
                                  {{0, 1}, {2, 3}});
    CHECK(!shortest_path(g, 0, 2).has_value());
    CHECK_THROWS_AS(shortest_path(g, 0, 99), std::invalid_argument);
}

TEST_CASE("shortest_path matches exhaustive enumeration on small random graphs") {
    int compared = 0;
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const GeoGraph g = random_graph(seed, 9, 0.3);
        if (g.node_count() < 2) continue;
        Rng rng(seed * 77 + 1);
        for (int k = 0; k < 4; ++k) {
            const NodeId a = static_cast<NodeId>(rng.index(g.node_count()));
            const NodeId b = static_cast<NodeId>(rng.index(g.node_count()));
            const auto fast = shortest_path(g, a, b);
            const auto slow = reference::shortest_path_exhaustive(g, a, b);
            REQUIRE(fast.has_value() == slow.has_value());
            if (fast) {
                CHECK(std::abs(fast->length - *slow) <= 1e-9 * std::max(1.0, *slow));
                ++compared;
            }
        }
    }
    CHECK(compared > 50);
}

TEST_CASE("shortest_path length is symmetric and ties break lexicographically") {
    for (std::uint64_t seed = 50; seed < 60; ++seed) {
        const GeoGraph g = random_graph(seed, 14, 0.2);
        Rng rng(seed);
        for (int k = 0; k < 6; ++k) {
            const NodeId a = static_cast<NodeId>(rng.index(g.node_count()));
            const NodeId b = static_cast<NodeId>(rng.index(g.node_count()));
            const auto ab = shortest_path(g, a, b);
            const auto ba = shortest_path(g, b, a);
            REQUIRE(ab.has_value() == ba.has_value());
            if (ab) CHECK(ab->length == ba->length);
        }
    }
    // diamond with two equal-length routes: the smaller middle id wins
    const GeoGraph d = make_graph({{0, 0, 0}, {1, 5, 5}, {2, 5, -5}, {3, 10, 0}},
                                  {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
    const auto p = shortest_path(d, 0, 3);
    REQUIRE(p.has_value());
    REQUIRE(p->nodes.size() == 3);
    CHECK(d.id_of(p->nodes[1]) == 1);
}

TEST_CASE("path length cache matches a recomputation") {
    const GeoGraph g = make_city_sized(3, 150, 100.0);
    Rng rng(9);
    for (int k = 0; k < 10; ++k) {
        const NodeId a = g.id_of(rng.index(g.node_count()));
        const NodeId b = g.id_of(rng.index(g.node_count()));
        const auto p = shortest_path(g, a, b);
        if (!p) continue;
        CHECK(std::abs(p->length - g.path_length(p->nodes)) <=
              1e-9 * std::max(1.0, p->length));
    }
}

TEST_CASE("project_point hits an edge midpoint exactly") {
    const GeoGraph g = make_graph({{0, 0, 0}, {1, 10, 0}}, {{0, 1}});
    const auto pr = project_point(g, {5.0, 0.0});
    CHECK(pr.dist == 0.0);
    REQUIRE(!pr.location.is_node());
    CHECK(pr.location.edge == 0);
    CHECK(testutil::near(pr.location.t, 0.5));
}

TEST_CASE("project_point clamps beyond segment ends to the node") {
    const GeoGraph g = make_graph({{0, 0, 0}, {1, 10, 0}}, {{0, 1}});
    const auto pr = project_point(g, {14.0, 3.0});
    CHECK(pr.location.is_node());
    CHECK(pr.location.node == 1);
    CHECK(testutil::near(pr.dist, 5.0));
    CHECK_THROWS_AS(project_point(GeoGraph{}, Vec2{0, 0}), std::domain_error);
}

TEST_CASE("project_point agrees with the linear-scan reference and dense sampling") {
    const GeoGraph g = random_graph(123, 16, 0.18);
    const SegmentGrid grid(g, 10.0);
    const GeoGraph dense = densify(g, 0.01);
    Rng rng(5);
    for (int k = 0; k < 200; ++k) {
        const Vec2 p{rng.uniform(-10.0, 110.0), rng.uniform(-10.0, 110.0)};
        const auto fast = project_point(g, grid, p);
        const auto ref = reference::project_point(g, p);
        CHECK(fast.dist == ref.dist);
        CHECK(fast.location.kind == ref.location.kind);
        // dense-sampling oracle: nearest densified node is within 0.02
        double best = 1e300;
        for (std::size_t v = 0; v < dense.node_count(); ++v)
            best = std::min(best, distance(dense.pos(v), p));
        CHECK(std::abs(best - fast.dist) <= 0.02);
    }
}

TEST_CASE("crop_by_travel emits points at interval multiples along a polyline") {
    const GeoGraph g = make_polyline({{0, 0}, {4, 0}, {12, 0}, {20, 0}});
    const auto pts = crop_by_travel(g, GraphLocation::at_node(0), 10.0, 5.0);
    REQUIRE(pts.size() == 3);
    CHECK(testutil::near(pts[0].x, 0.0));
    CHECK(testutil::near(pts[1].x, 5.0));
    CHECK(testutil::near(pts[2].x, 10.0));
}

TEST_CASE("crop_by_travel with budget below the interval yields only the start") {
    const GeoGraph g = make_polyline({{0, 0}, {20, 0}});
    const auto pts = crop_by_travel(g, GraphLocation::on_edge(0, 0.25), 3.0, 5.0);
    REQUIRE(pts.size() == 1);
    CHECK(testutil::near(pts[0].x, 5.0));
}

TEST_CASE("crop_by_travel fans out over both branches of a Y junction") {
    // stem 0..4, then two branches of length 10 each
    const GeoGraph g = make_graph(
        {{0, 0, 0}, {1, 4, 0}, {2, 14, 0}, {3, 4, 10}},
        {{0, 1}, {1, 2}, {1, 3}});
    const auto pts = crop_by_travel(g, GraphLocation::at_node(0), 10.0, 5.0);
    // 0 at the start, 5 and 10 on each branch
    CHECK(pts.size() == 5);
}

TEST_CASE("crop_by_travel control points lie on the graph") {
    const GeoGraph g = make_city_sized(11, 200, 100.0);
    const ArcTable arcs(g);
    Rng rng(2);
    for (int k = 0; k < 5; ++k) {
        const auto start = arcs.sample(rng.next_double());
        for (const auto& p : crop_by_travel(g, start, 300.0, 15.0)) {
            CHECK(project_point(g, p).dist <= 1e-9);
        }
    }
}

TEST_CASE("remove_edges removes material and prunes isolated nodes") {
    const GeoGraph g = make_graph({{0, 0, 0}, {1, 10, 0}}, {{0, 1}});
    const GeoGraph r = remove_edges(g, {0});
    CHECK(r.node_count() == 0);
    CHECK(r.edge_count() == 0);

    const GeoGraph g2 = random_graph(2, 10, 0.3);
    const GeoGraph same = remove_edges(g2, {});
    CHECK(same.node_count() == g2.node_count());
    CHECK(testutil::same_edge_sets(g2, same));

    std::set<EdgeId> victims{0, 2};
    const GeoGraph fewer = remove_edges(g2, victims);
    CHECK(fewer.edge_count() == g2.edge_count() - victims.size());
    CHECK_THROWS_AS(remove_edges(g2, {static_cast<EdgeId>(g2.edge_count())}),
                    std::invalid_argument);
}

TEST_CASE("chains contract degree-2 runs and detect cycles") {
    // plus: four arms around a center
    const GeoGraph plus = make_graph(
        {{0, 0, 0}, {1, 10, 0}, {2, -10, 0}, {3, 0, 10}, {4, 0, -10}},
        {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
    CHECK(extract_chains(plus).size() == 4);

    const GeoGraph ring = make_graph({{0, 0, 0}, {1, 10, 0}, {2, 10, 10}, {3, 0, 10}},
                                     {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    const auto chains = extract_chains(ring);
    REQUIRE(chains.size() == 1);
    CHECK(chains[0].is_cycle);
    CHECK(testutil::near(chains[0].length, 40.0));
}

TEST_CASE("arc table sampling is deterministic and stays on the graph") {
    const GeoGraph g = make_city_sized(4, 120, 100.0);
    const ArcTable arcs(g);
    Rng rng1(3), rng2(3);
    for (int i = 0; i < 20; ++i) {
        const auto a = arcs.sample(rng1.next_double());
        const auto b = arcs.sample(rng2.next_double());
        CHECK(a.edge == b.edge);
        CHECK(a.t == b.t);
    }
}
