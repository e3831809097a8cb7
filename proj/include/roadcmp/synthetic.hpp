#pragma once

#include <cstdint>

#include "roadcmp/graph.hpp"

namespace roadcmp {

// Seeded city-like test network: a jittered grid with a share of the edges
// dropped (connectivity preserved) and a share subdivided into gentle
// two-segment bends. Coordinates land on the 1/64 m lattice.
struct CityOptions {
    int cols = 20;
    int rows = 18;
    double spacing = 200.0;      // m between grid lines
    double jitter = 0.10;        // node jitter as a fraction of spacing
    double drop_fraction = 0.12; // edges removed (connectivity kept)
    double bend_fraction = 0.25; // edges subdivided with a lateral bow
};

GeoGraph make_city(std::uint64_t seed, const CityOptions& opt = {});

// Convenience: city sized to roughly `target_nodes` nodes.
GeoGraph make_city_sized(std::uint64_t seed, int target_nodes, double spacing = 150.0);

}  // namespace roadcmp
