#pragma once

#include <cstdint>
#include <random>

#include "incsp/graph.hpp"

namespace incsp {

enum class WorkloadKind {
    general,      // inserts and decreases anywhere
    source_only,  // every update touches an edge leaving `source`
};

struct GenParams {
    std::size_t n = 0;
    std::size_t m0 = 0;  // initial edge count
    double w_max = 1.0;
    std::size_t n_updates = 0;
    std::uint64_t seed = 0;
    WorkloadKind kind = WorkloadKind::general;
    VertexId source = 0;
    double zero_weight_prob = 0.05;
    double decrease_prob = 0.35;
};

struct RandomInstance {
    DynGraph graph;
    UpdateSequence updates;
};

// Deterministic for a given seed; every produced update is valid at the
// moment it is issued. Weights are integers (exactly representable).
RandomInstance generate_random_sequence(const GenParams& params);

}  // namespace incsp
