#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace incsp {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct WeightedEdge {
    VertexId tail = 0;
    VertexId head = 0;
    double weight = 0.0;
};

// Weight domain is {0} u [1, W]. Inputs are expected to be exactly
// representable doubles (integers or dyadic rationals); all path sums then
// stay exact and strict comparisons are safe.
inline bool weight_in_domain(double w, double w_max) {
    return w == 0.0 || (w >= 1.0 && w <= w_max);
}

struct WeightEvent {
    std::uint32_t time = 0;
    double weight = 0.0;
};

struct EdgeRecord {
    VertexId tail = 0;
    VertexId head = 0;
    // Timestamps strictly increasing, weights strictly decreasing.
    std::vector<WeightEvent> history;

    double current_weight() const { return history.back().weight; }
    std::uint32_t inserted_at() const { return history.front().time; }
};

enum class UpdateKind { insert, decrease };

struct Update {
    UpdateKind kind = UpdateKind::insert;
    VertexId tail = 0;
    VertexId head = 0;
    double weight = 0.0;
};

struct UpdateSequence {
    std::vector<Update> updates;

    std::size_t delta() const { return updates.size(); }
};

// Adjacency-list weighted digraph under insertions and weight decreases,
// with a per-edge timestamped weight history so any past version can be
// reconstructed. Parallel edges are kept as distinct records; a decrease
// targets the minimum-weight record of its (tail, head) pair.
class DynGraph {
  public:
    explicit DynGraph(std::size_t n);

    std::size_t order() const { return out_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    std::uint32_t current_time() const { return now_; }

    // Initial edges live at timestamp 0 and must precede any update.
    EdgeId add_initial_edge(VertexId u, VertexId v, double w);

    // Applies one update at timestamp current_time()+1.
    // Throws std::invalid_argument on a malformed update (decrease of a
    // nonexistent pair, non-decreasing weight, weight outside {0} u [1, ...)).
    EdgeId apply(const Update& u);

    const EdgeRecord& edge(EdgeId e) const { return edges_[e]; }
    std::span<const EdgeRecord> edges() const { return edges_; }
    std::span<const EdgeId> out_edges(VertexId u) const { return out_[u]; }
    std::span<const EdgeId> in_edges(VertexId v) const { return in_[v]; }

    // Weight of edge e in version G^t; kInf when the edge is absent in G^t.
    double weight_at(EdgeId e, std::uint32_t t) const;

    // Smallest current weight among parallel (u,v) records; kInf if none.
    double pair_min_weight(VertexId u, VertexId v) const;

    // Consistency check used by tests: adjacency mirrors, history
    // monotonicity, weight domain.
    void validate() const;

  private:
    EdgeId push_edge(VertexId u, VertexId v, double w, std::uint32_t t);

    std::vector<std::vector<EdgeId>> out_;
    std::vector<std::vector<EdgeId>> in_;
    std::vector<EdgeRecord> edges_;
    std::map<std::pair<VertexId, VertexId>, EdgeId> min_edge_;
    std::uint32_t now_ = 0;
};

// Online form of the weight-decrease filter: a decrease is recorded only if
// it beats the recorded weight by a factor (1+eps); inserts are always
// recorded. Recorded weights never exceed (1+eps) times true weights.
class DecreaseFilter {
  public:
    explicit DecreaseFilter(double eps) : eps_(eps) {}

    void seed(const DynGraph& g);
    // Returns true if the update should be kept.
    bool admit(const Update& u);
    double recorded(VertexId u, VertexId v) const;

  private:
    double eps_;
    std::map<std::pair<VertexId, VertexId>, double> recorded_;
};

// Applies DecreaseFilter to a whole sequence. `base` supplies the initial
// recorded weight of edges that predate the sequence.
UpdateSequence filter_decreases(const DynGraph& base, const UpdateSequence& seq, double eps);

}  // namespace incsp
