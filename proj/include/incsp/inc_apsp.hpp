#pragma once

#include <deque>
#include <memory>
#include <optional>
#include <random>

#include "incsp/dense_apsp.hpp"
#include "incsp/graph.hpp"
#include "incsp/source_sssp.hpp"

namespace incsp {

enum class ApspVariant { deterministic, randomized };

struct IncApspParams {
    std::uint32_t b = 1;         // phase length
    std::uint32_t p = 1;         // phases between resets
    double xi = 0.0;             // shared accuracy of all components
    double eps_internal = 0.0;   // eps/4: filter threshold and cascade budget
    double y_prime = 0.0;        // log2(m) + 2
    std::uint32_t alpha_step = 0;  // ceil(4 * y_prime): offset growth per phase
    std::uint32_t rho_star = 0;  // randomized reset target; 0 for deterministic
    std::size_t m_for_params = 0;
};

// Incremental all-pairs (1+eps)-approximate distances: n forward and n
// reverse source structures sharing one base graph, shortcut edges fed by a
// dense all-pairs component over the endpoints of the current phase's
// updates, FIFO event propagation to a fixpoint after every update, batch
// insertion of the phase edges on phase close, and scheduled resets.
class IncAPSP {
  public:
    IncAPSP(const DynGraph& g0, double eps, ApspVariant variant, std::uint64_t seed, double w_max,
            std::optional<std::size_t> m_hint = std::nullopt);

    // One insert or weight decrease on the true graph. Quiesces before
    // returning; filtered-out decreases cost O(1).
    void update(const Update& u);

    double query(VertexId u, VertexId v) const;  // kInf = unreachable

    // --- introspection ---------------------------------------------------------
    const IncApspParams& params() const { return params_; }
    ApspVariant variant() const { return variant_; }
    double weight_bound() const { return w_max_; }
    std::size_t order() const { return n_; }
    std::uint32_t phases_since_reset() const { return k_; }
    std::uint32_t rank_offset() const { return rho_; }
    const SourceSSSP& forward_structure(VertexId s) const { return *fwd_[s]; }
    const SourceSSSP& reverse_structure(VertexId t) const { return *rev_[t]; }
    const DenseAPSP& dense() const { return *dense_; }
    std::span<const VertexId> current_endpoints() const { return v_cur_; }
    std::size_t phase_edges() const { return e_cur_.size(); }
    bool in_v_cur(VertexId v) const { return slot_of_[v] >= 0; }
    double dense_estimate(VertexId u, VertexId v) const;
    double dense_emitted(VertexId u, VertexId v) const;
    std::uint64_t updates_applied() const { return updates_applied_; }
    std::uint64_t updates_filtered() const { return updates_filtered_; }
    std::uint64_t resets_performed() const { return resets_; }

    // Aggregated counters over all 2n structures, for the bench CSV.
    struct WorkTotals {
        std::uint64_t pops = 0;
        std::uint64_t pushes = 0;
        std::uint64_t edge_scans = 0;
        std::uint64_t rank_increases = 0;
        std::uint64_t shortcut_decreases = 0;
    };
    WorkTotals work_totals() const;

    // Test hook: runs right after each deterministic or randomized reset of a
    // single structure.
    std::function<void(const SourceSSSP&)> after_structure_reset;

    // Test hook: runs at phase close before any state changes, with the batch
    // about to be inserted and its certificate exponent.
    std::function<void(std::span<const WeightedEdge>, std::uint32_t)> before_batch;

  private:
    struct Event {
        enum class Kind { dense_in, shortcut_fwd, shortcut_rev } kind;
        VertexId a;  // dense: tail / shortcut: owner
        VertexId b;  // dense: head / shortcut: target
        double value;
    };

    void ensure_in_v_cur(VertexId v);
    void enqueue_dense(VertexId u, VertexId v, double w);
    void collect_structure_changes(Direction dir, VertexId owner);
    void drain_events();
    void close_phase();
    void reset_all();
    std::size_t fed_index(std::uint32_t su, std::uint32_t sv) const {
        return static_cast<std::size_t>(su) * (2 * params_.b) + sv;
    }

    std::size_t n_;
    double eps_;
    double w_max_;
    ApspVariant variant_;
    IncApspParams params_;
    std::mt19937_64 rng_;
    std::optional<std::size_t> m_hint_;

    std::shared_ptr<DynGraph> base_;
    std::vector<std::unique_ptr<SourceSSSP>> fwd_;
    std::vector<std::unique_ptr<SourceSSSP>> rev_;

    DecreaseFilter filter_;
    std::unique_ptr<DenseAPSP> dense_;
    std::vector<WeightedEdge> e_cur_;
    std::vector<VertexId> v_cur_;
    std::vector<std::int32_t> slot_of_;
    std::vector<double> last_fed_;  // per slot pair: D -> dense emission filter

    std::deque<Event> queue_;
    std::uint32_t k_ = 0;    // phases completed since last reset
    std::uint32_t rho_ = 0;  // shared rank offset of all structures
    std::uint64_t updates_applied_ = 0;
    std::uint64_t updates_filtered_ = 0;
    std::uint64_t resets_ = 0;
};

// xi for a standalone source-SSSP structure hitting a (1+eps) target.
double xi_for_epsilon(double eps, std::size_t m_final);

}  // namespace incsp
