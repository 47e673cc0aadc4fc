#pragma once

#include <random>

#include "incsp/inc_apsp.hpp"
#include "incsp/io.hpp"
#include "incsp/offline_sssp.hpp"
#include "incsp/oracle.hpp"

namespace incsp {

struct VerifyOptions {
    double eps = 0.5;
    ApspVariant variant = ApspVariant::deterministic;
    std::uint64_t seed = 1;
    std::size_t check_every = 1;
    std::size_t offline_extra_queries = 200;
    bool check_certificates = true;
};

// Replays the instance through a SourceSSSP (source = vertex 0; every update
// must be source-incident) with periodic full oracle checks: the distance
// sandwich with xi = eps/(2 log2 m + 2), the slack invariant, rank-system
// conditions and the drop/work accounting.
OracleReport verify_sssp_replay(const Instance& inst, const VerifyOptions& opt);

// Replays through IncAPSP with per-check_every all-pairs oracle comparison,
// shortcut invariants (1)-(3), shortcut soundness, and the estimate-error
// cascade items at their designed exponents.
OracleReport verify_apsp_replay(const Instance& inst, const VerifyOptions& opt);

// Builds the offline structure and checks every embedded query plus
// offline_extra_queries random (v, j) pairs against per-version oracles,
// plus the costly-call and collection-size bounds.
OracleReport verify_offline(const Instance& inst, const VerifyOptions& opt);

// Picks the next adversarial update from the structure's current outputs and
// the true all-pairs distances.
using AdversaryStrategy = std::function<Update(
    const IncAPSP&, const std::vector<std::vector<double>>& true_dist, std::mt19937_64&)>;

// Closes the pair with the worst estimate-to-distance ratio with a cheap
// edge.
AdversaryStrategy worst_ratio_strategy();

// Drives `rounds` adversarial insertions, each chosen by `strategy` (default:
// worst-ratio closing) after reading all current answers. The (1+eps)
// sandwich is re-verified every round. `g` is the true graph replica and is
// mutated alongside the structure.
OracleReport adaptive_adversary(IncAPSP& x, DynGraph& g, std::size_t rounds, double eps,
                                std::mt19937_64& rng, AdversaryStrategy strategy = {});

}  // namespace incsp
