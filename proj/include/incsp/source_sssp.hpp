#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <span>

#include "incsp/graph.hpp"
#include "incsp/propagate.hpp"

namespace incsp {

// Incremental SSSP under insertions (or weight decreases) of edges leaving
// the source. The structure's graph is a shared base graph plus one private
// "shortcut" edge slot per vertex; a source update lowers the slot's weight.
// Under Direction::reverse the base is traversed with edges flipped, turning
// the single-sink problem into this single-source one.
//
// Estimates satisfy, between public operations:
//   dist(s,v) <= d(v) <= (1+xi)^{1+rho+log2 m} * dist(s,v)
// where dist is over the composed graph, rho is the rank offset and m counts
// composed edges. Unreachable vertices carry kInf; finiteness of d(v) is
// exactly reachability, so no separate reachability structure is kept.
class SourceSSSP {
  public:
    static constexpr std::uint32_t kNoRank = 0xffffffffu;

    struct Counters {
        std::uint64_t sync_input_total = 0;  // |V_input| summed over Synchronize calls
        std::uint64_t landings = 0;          // vertices first becoming reachable
        std::uint64_t shortcut_weight_drops = 0;
        std::uint64_t triggered_inserts = 0;  // source updates past the estimate guard
        std::uint64_t rank_increase_total = 0;
    };

    SourceSSSP(std::shared_ptr<DynGraph> base, VertexId source, double xi, double w_max,
               Direction dir = Direction::forward);

    // Inserts (or lowers) the source edge s->v. Ignored updates still refresh
    // the stored shortcut weight, which only strengthens later guards.
    // Returns true when propagation ran.
    bool source_insert(VertexId v, double w);

    // Batch insertion of arbitrary edges, valid when the caller guarantees
    // d(v) <= (1+xi)^alpha * dist_{graph+F}(s,v) beforehand. Inserts into the
    // owned base graph, relaxes each edge, then rebases certificates:
    // rho := alpha, all ranks 0.
    void batch_insert(std::span<const WeightedEdge> edges, std::uint32_t alpha);

    // Split batch path for compositions where the base graph is shared and
    // mutated once externally.
    void note_base_edge(VertexId tail, VertexId head);
    void relax_inserted_edge(VertexId tail, VertexId head, double w);
    void finish_batch(std::uint32_t alpha);

    // Propagates over every reachable vertex; all vertices become
    // 0-certified, ranks and the offset drop to 0.
    void det_reset();

    // Randomized certificate reset: propagate over sampled estimate
    // intervals, then rho := lambda. Every vertex is lambda-certified whp.
    void rand_reset(std::uint32_t lambda, std::mt19937_64& rng);

    double estimate(VertexId v) const { return est_.d[v]; }  // kInf = unreachable
    bool reachable(VertexId v) const { return std::isfinite(est_.d[v]); }

    // --- composed graph view -------------------------------------------------
    class View {
      public:
        View(const SourceSSSP& owner) : o_(&owner) {}
        std::size_t vertex_count() const { return o_->base_->order(); }
        template <typename F>
        void for_each_out_edge(VertexId u, F&& f) const {
            const DynGraph& g = *o_->base_;
            if (o_->dir_ == Direction::forward) {
                for (EdgeId e : g.out_edges(u)) f(g.edge(e).head, g.edge(e).current_weight());
            } else {
                for (EdgeId e : g.in_edges(u)) f(g.edge(e).tail, g.edge(e).current_weight());
            }
            if (u == o_->source_) {
                for (VertexId t = 0; t < o_->shortcut_.size(); ++t) {
                    if (std::isfinite(o_->shortcut_[t])) f(t, o_->shortcut_[t]);
                }
            }
        }

      private:
        const SourceSSSP* o_;
    };
    View composed_view() const { return View(*this); }

    // --- introspection ---------------------------------------------------------
    VertexId source() const { return source_; }
    Direction direction() const { return dir_; }
    double xi() const { return xi_; }
    double weight_bound() const { return w_max_; }
    std::uint32_t ell() const { return ell_; }
    std::uint32_t rank_offset() const { return rho_; }
    std::uint32_t max_rank() const { return max_rank_; }
    std::uint32_t rank(VertexId v) const { return rank_[v]; }
    std::int64_t class_degree(std::uint32_t k) const {
        return k < class_degree_.size() ? class_degree_[k] : 0;
    }
    std::int64_t degree(VertexId v) const { return degree_[v]; }
    double shortcut_weight(VertexId v) const { return shortcut_[v]; }
    std::uint32_t shortcut_triggers(VertexId v) const { return shortcut_triggers_[v]; }
    std::size_t composed_edge_count() const { return base_->edge_count() + shortcut_count_; }
    const DynGraph& base() const { return *base_; }
    const EstimateVector& estimates() const { return est_; }
    const PDStats& stats() const { return stats_; }
    const Counters& counters() const { return counters_; }

    // deg(C_k) > sum_{j>k} deg(C_j) for all k <= max rank.
    bool sync_quiescent() const;
    std::vector<std::pair<VertexId, VertexId>> slack_violations() const {
        return check_slack_invariant(composed_view(), est_, xi_);
    }

    // Estimate drops of the last public operation (source_insert or
    // relax_inserted_edge), for event-driven compositions.
    std::span<const VertexId> last_changed() const { return changed_; }

    // Test hooks; fired after every internal propagation / synchronize.
    std::function<void(const SourceSSSP&, std::span<const VertexId>)> after_propagate;
    std::function<void(const SourceSSSP&)> after_synchronize;

    std::uint32_t randomized_reset_constant = 2;  // the c of the sampling loop

  private:
    friend class View;

    struct Bucket {
        std::int64_t degree = 0;
        std::vector<VertexId> members;
    };

    void begin_change_collection();
    void mark_changed(VertexId v);
    void after_estimate_write(VertexId v, double old_value);
    std::int32_t bucket_index(double d) const;
    void bucket_insert(VertexId v);
    void bucket_erase(VertexId v);
    void bump_degree(VertexId v, std::int64_t delta);

    void enroll(VertexId v, std::uint32_t k);
    void set_rank(VertexId v, std::uint32_t k);
    void assign_rank_or_enroll(VertexId v, std::uint32_t k);
    void reset_ranks_to_zero();

    bool set_shortcut_weight(VertexId v, double w);
    std::vector<VertexId> guarded_relax(VertexId head, double cand);
    void synchronize();
    std::vector<VertexId> run_pd(std::span<const VertexId> input);

    std::shared_ptr<DynGraph> base_;
    VertexId source_;
    double xi_;
    double w_max_;
    Direction dir_;
    std::uint32_t ell_;

    EstimateVector est_;
    std::vector<double> shortcut_;
    std::size_t shortcut_count_ = 0;
    std::vector<std::uint32_t> shortcut_triggers_;

    std::vector<std::int64_t> degree_;

    std::vector<std::uint32_t> rank_;
    std::vector<std::uint32_t> class_pos_;
    std::vector<std::vector<VertexId>> class_members_;
    std::vector<std::int64_t> class_degree_;
    std::uint32_t max_rank_ = 0;
    std::uint32_t rho_ = 0;
    std::vector<std::uint32_t> rank_increases_;

  public:
    std::uint32_t rank_increases(VertexId v) const { return rank_increases_[v]; }

  private:
    std::map<std::int32_t, Bucket> buckets_;
    std::vector<std::int32_t> bucket_of_;  // kNoBucketSentinel when d = kInf
    std::vector<std::uint32_t> bucket_pos_;
    static constexpr std::int32_t kNoBucket = std::numeric_limits<std::int32_t>::min();

    PDStats stats_;
    PDScratch scratch_;
    Counters counters_;

    std::vector<VertexId> changed_;
    std::vector<std::uint64_t> change_mark_;
    std::uint64_t change_epoch_ = 0;
};

}  // namespace incsp
