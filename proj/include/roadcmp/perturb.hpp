#pragma once

#include <cstdint>
#include <string>

#include "roadcmp/graph.hpp"

namespace roadcmp {

enum class PerturbKind {
    interruptions,
    overconnections,
    node_noise,
    doubled_pred,
    doubled_gt,
    far_false_positives,
};

const char* to_string(PerturbKind k);
PerturbKind perturb_kind_from_string(const std::string& s);

// severity is a count for interruptions/overconnections/doubled_*, meters
// for node_noise and a fraction of total length for far_false_positives
struct PerturbationSpec {
    PerturbKind kind = PerturbKind::interruptions;
    double severity = 0.0;
    std::uint64_t seed = 0;
};

// Magnitude knobs shared by the injectors.
struct PerturbKnobs {
    double gap = 20.0;          // road material removed per interruption, m
    double r_min = 50.0;        // overconnection span bounds, m
    double r_max = 300.0;
    double offset = 15.0;       // lateral displacement of doubled roads, m
    double disk_radius = 200.0; // removal disk radius, m
};

struct InjectResult {
    GeoGraph graph;
    double achieved = 0.0;  // breaks/edges/chains applied, or removed fraction
};

// Deletes `gap` meters of road centered at points drawn uniformly by arc
// length, at least 3*gap away from any junction or endpoint. Best effort:
// stops early when no eligible stretch remains.
InjectResult inject_interruptions(const GeoGraph& g, int n, double gap, std::uint64_t seed);

// Adds straight edges between random on-graph points whose separation lies
// in [r_min, r_max] and which are not already connected by a route shorter
// than 2*r_max.
InjectResult inject_overconnections(const GeoGraph& g, int n, double r_min, double r_max,
                                    std::uint64_t seed);

// Displaces every node by an isotropic Gaussian offset; topology unchanged.
GeoGraph inject_node_noise(const GeoGraph& g, double sigma, std::uint64_t seed);

// Duplicates feature-to-feature chains (picked by length, without
// replacement), laterally offset and connected to the original chain ends.
InjectResult inject_doubled_roads(const GeoGraph& g, int n, double offset, std::uint64_t seed);

// Deletes all road material inside random disks (centers drawn on the
// remaining graph) until at least `fraction` of the total length is gone.
InjectResult remove_far_regions(const GeoGraph& g, double fraction, double disk_radius,
                                std::uint64_t seed);

struct PerturbedPair {
    GeoGraph gt;
    GeoGraph pred;
    double achieved = 0.0;
};

// Builds a (ground truth, prediction) pair from one source graph.
// doubled_gt and far_false_positives perturb the ground-truth copy, all
// other kinds perturb the prediction copy. Severity 0 returns the source
// unchanged on both sides.
PerturbedPair make_pair(const GeoGraph& g, const PerturbationSpec& spec,
                        const PerturbKnobs& knobs = {});

}  // namespace roadcmp
