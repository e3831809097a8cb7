#include "roadcmp/graph_io.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "roadcmp/errors.hpp"

namespace roadcmp {

namespace {

using nlohmann::ordered_json;

ordered_json parse_or_throw(const std::string& bytes) {
    try {
        return ordered_json::parse(bytes);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError("JSON parse failure at byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

LoadedGraph load_canonical(const ordered_json& doc) {
    if (!doc.is_object() || !doc.contains("nodes") || !doc.contains("edges"))
        throw FormatError("graph JSON must be an object with 'nodes' and 'edges'");
    GraphBuilder b;
    for (const auto& n : doc.at("nodes")) {
        if (!n.contains("id") || !n.contains("x") || !n.contains("y"))
            throw FormatError("node entries need 'id', 'x' and 'y'");
        b.add_node(n.at("id").get<NodeId>(), {n.at("x").get<double>(), n.at("y").get<double>()});
    }
    for (const auto& e : doc.at("edges")) {
        if (!e.is_array() || e.size() != 2) throw FormatError("edge entries must be [a, b] pairs");
        b.add_edge(e.at(0).get<NodeId>(), e.at(1).get<NodeId>());
    }
    LoadedGraph out;
    out.graph = b.build(&out.dropped);
    return out;
}

// merges coordinates within 1e-6 m via a hash over 1e-6 cells
class NodeMerger {
public:
    NodeId id_for(const Vec2& p) {
        const long long qx = std::llround(p.x * 1e6);
        const long long qy = std::llround(p.y * 1e6);
        for (long long dx = -1; dx <= 1; ++dx) {
            for (long long dy = -1; dy <= 1; ++dy) {
                const auto it = cells_.find(key(qx + dx, qy + dy));
                if (it == cells_.end()) continue;
                for (const auto& [idx, pos] : it->second) {
                    if (std::abs(pos.x - p.x) <= 1e-6 && std::abs(pos.y - p.y) <= 1e-6) {
                        ++merged;
                        return idx;
                    }
                }
            }
        }
        const NodeId id = next_++;
        cells_[key(qx, qy)].emplace_back(id, p);
        points.emplace_back(id, p);
        return id;
    }

    std::vector<std::pair<NodeId, Vec2>> points;
    int merged = 0;

private:
    static std::uint64_t key(long long x, long long y) {
        return static_cast<std::uint64_t>(x) * 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(y);
    }
    NodeId next_ = 0;
    std::map<std::uint64_t, std::vector<std::pair<NodeId, Vec2>>> cells_;
};

LoadedGraph load_geojson(const ordered_json& doc) {
    if (!doc.is_object() || doc.value("type", "") != "FeatureCollection")
        throw FormatError("GeoJSON root must be a FeatureCollection");
    NodeMerger merger;
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (const auto& feature : doc.value("features", ordered_json::array())) {
        const auto& geom = feature.value("geometry", ordered_json());
        if (!geom.is_object() || geom.value("type", "") != "LineString") continue;
        NodeId prev = -1;
        for (const auto& coord : geom.value("coordinates", ordered_json::array())) {
            if (!coord.is_array() || coord.size() < 2)
                throw FormatError("LineString coordinates must be [x, y] pairs");
            const NodeId cur =
                merger.id_for({coord.at(0).get<double>(), coord.at(1).get<double>()});
            if (prev >= 0) edges.emplace_back(prev, cur);
            prev = cur;
        }
    }
    GraphBuilder b;
    for (const auto& [id, pos] : merger.points) b.add_node(id, pos);
    for (const auto& [a, bb] : edges) b.add_edge(a, bb);
    LoadedGraph out;
    out.graph = b.build(&out.dropped);
    out.merged_nodes = merger.merged;
    return out;
}

}  // namespace

LoadedGraph load_graph(const std::string& bytes, GraphFormat format) {
    const ordered_json doc = parse_or_throw(bytes);
    return format == GraphFormat::json ? load_canonical(doc) : load_geojson(doc);
}

LoadedGraph load_graph_file(const std::string& path) {
    const bool geo = path.size() >= 8 && path.substr(path.size() - 8) == ".geojson";
    return load_graph_file(path, geo ? GraphFormat::geojson : GraphFormat::json);
}

LoadedGraph load_graph_file(const std::string& path, GraphFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_graph(ss.str(), format);
}

std::string save_graph(const GeoGraph& g) {
    ordered_json doc;
    doc["nodes"] = ordered_json::array();
    for (const auto& n : g.nodes()) {
        doc["nodes"].push_back({{"id", n.id}, {"x", n.pos.x}, {"y", n.pos.y}});
    }
    doc["edges"] = ordered_json::array();
    for (const auto& e : g.edges()) {
        doc["edges"].push_back({g.id_of(e.a), g.id_of(e.b)});
    }
    return doc.dump();
}

void save_graph_file(const GeoGraph& g, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write " + path);
    out << save_graph(g);
}

}  // namespace roadcmp
