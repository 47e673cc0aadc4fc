#pragma once

#include <iosfwd>
#include <memory>
#include <span>

#include "incsp/graph.hpp"

namespace incsp {

// Per-vertex ordered (timestamp, estimate) entries with prefix-min and
// suffix-max retrieval. Sizes stay polylogarithmic, so linear scans suffice.
class EstimateCollection {
  public:
    struct Entry {
        std::uint32_t time;
        double estimate;
    };

    explicit EstimateCollection(std::size_t n) : per_vertex_(n) {}

    void store(VertexId v, std::uint32_t t, double est);
    // Smallest estimate with timestamp <= t; kInf if none.
    double prefix_min(VertexId v, std::uint32_t t) const;
    // Largest estimate with timestamp >= t; -kInf if none.
    double suffix_max(VertexId v, std::uint32_t t) const;

    std::span<const Entry> entries(VertexId v) const { return per_vertex_[v]; }
    std::size_t size(VertexId v) const { return per_vertex_[v].size(); }

  private:
    std::vector<std::vector<Entry>> per_vertex_;
};

// Offline incremental SSSP: exact endpoint distances plus a recursive
// divide-and-conquer over the update timeline; query (v, j) returns the
// smallest stored estimate for v at a timestamp <= j, a (1+eps)-approximation
// of dist_{G^j}(s, v).
//
// Virtual source edges of weight nW realize the reachability assumption for
// the computation; query-time reachability is decided by an incremental
// reachability sidecar instead of the nW threshold, which stays unambiguous
// for every eps.
class OfflineSSSP {
  public:
    OfflineSSSP(const DynGraph& g0, const UpdateSequence& seq, VertexId source, double eps,
                double w_max);

    double query(VertexId v, std::uint32_t j) const;  // kInf = unreachable in G^j
    bool reachable_at(VertexId v, std::uint32_t j) const {
        return reach_time_[v] <= j;
    }

    std::size_t order() const { return n_; }
    std::uint32_t delta() const { return delta_; }
    double xi() const { return xi_; }
    double weight_bound() const { return w_max_; }
    const EstimateCollection& collection() const { return estimates_; }
    std::uint32_t costly_calls(VertexId v) const { return costly_calls_[v]; }
    std::uint32_t max_recursion_depth() const { return max_depth_; }
    std::uint64_t search_calls() const { return search_calls_; }
    std::uint64_t dijkstra_pops() const { return dijkstra_pops_; }

    // Flat text serialization; load rebuilds a query-only structure.
    void save(std::ostream& os) const;
    static OfflineSSSP load(std::istream& is);

  private:
    OfflineSSSP() = default;

    void build(const DynGraph& g0, const UpdateSequence& seq);
    void search(std::uint32_t alpha, std::uint32_t beta,
                const std::vector<VertexId>& candidates, std::uint32_t depth);

    std::size_t n_ = 0;
    VertexId source_ = 0;
    double eps_ = 0.0;
    double xi_ = 0.0;
    double w_max_ = 1.0;
    std::uint32_t delta_ = 0;

    // Final graph with full weight histories; virtual source edges included.
    std::shared_ptr<DynGraph> history_;
    EstimateCollection estimates_{0};
    std::vector<std::uint32_t> reach_time_;  // first version where reachable
    std::vector<std::uint32_t> costly_calls_;
    std::uint32_t max_depth_ = 0;
    std::uint64_t search_calls_ = 0;
    std::uint64_t dijkstra_pops_ = 0;
};

}  // namespace incsp
