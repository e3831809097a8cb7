#pragma once

#include <string>

#include "roadcmp/graph.hpp"

namespace roadcmp {

enum class GraphFormat { json, geojson };

struct LoadedGraph {
    GeoGraph graph;
    BuildStats dropped;      // self-loops / duplicates / zero-length edges
    int merged_nodes = 0;    // geojson: coincident endpoints collapsed
};

// Canonical graph JSON:
//   {"nodes":[{"id":<int>,"x":<float>,"y":<float>},...],"edges":[[a,b],...]}
// GeoJSON: FeatureCollection of LineStrings; consecutive coordinates become
// edges, endpoints within 1e-6 m are merged into one node.
LoadedGraph load_graph(const std::string& bytes, GraphFormat format);

// File loader; format picked by extension (.geojson) unless forced.
LoadedGraph load_graph_file(const std::string& path);
LoadedGraph load_graph_file(const std::string& path, GraphFormat format);

// Canonical JSON; load(save(g)) reproduces coordinates bit-exactly and the
// same edge set.
std::string save_graph(const GeoGraph& g);
void save_graph_file(const GeoGraph& g, const std::string& path);

}  // namespace roadcmp
