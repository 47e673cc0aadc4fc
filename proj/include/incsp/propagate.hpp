#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "incsp/graph.hpp"

namespace incsp {

// Per-vertex distance estimates. Values live in {0} u [1, nW]; kInf marks a
// vertex not (yet) reachable from the source. Every finite value is the
// length of some source walk in the current graph and never increases.
//
// drops counts the times a value fell past the (1+xi) guard and enqueued the
// vertex. The first finite assignment (the vertex becoming reachable) is not
// a drop: it plays the role of the nW-weight virtual edge initialization and
// keeps drops(v) <= ceil(log_{1+xi}(nW)) provable even when a later fall to 0
// occurs.
struct EstimateVector {
    std::vector<double> d;
    std::vector<std::uint32_t> drops;

    EstimateVector() = default;
    explicit EstimateVector(std::size_t n) : d(n, kInf), drops(n, 0) {}

    std::size_t size() const { return d.size(); }
};

struct PDStats {
    std::uint64_t pops = 0;
    std::uint64_t pushes = 0;
    std::uint64_t edge_scans = 0;
    std::uint64_t touched_degree_sum = 0;
};

// Reusable scratch so repeated small calls do not allocate. Epoch stamping
// replaces per-call flag resets.
struct PDScratch {
    std::vector<std::uint64_t> in_queue_epoch;
    std::vector<std::uint64_t> popped_epoch;
    std::vector<std::pair<double, VertexId>> heap;
    std::uint64_t epoch = 0;

    void ensure(std::size_t n) {
        if (in_queue_epoch.size() < n) {
            in_queue_epoch.resize(n, 0);
            popped_epoch.resize(n, 0);
        }
    }
};

// A propagation view supplies:
//   std::size_t vertex_count() const
//   void for_each_out_edge(VertexId u, F f) const   with f(VertexId head, double w)

// Dijkstra-like estimate propagation. Initializes the queue with `input`,
// pops in key order (ties to the smaller vertex id), and
//   - relaxes freely into vertices currently in the queue,
//   - enqueues a vertex outside the queue only when its estimate falls by a
//     factor more than (1+xi).
// Returns every vertex that entered the queue. Afterwards each edge with both
// endpoints touched is relaxed: d(head) <= d(tail) + w.
//
// on_change(v, old_value) fires right after every estimate write.
template <typename View, typename OnChange>
std::vector<VertexId> propagate_dijkstra(const View& g, EstimateVector& est,
                                         std::span<const VertexId> input, double xi,
                                         PDStats& stats, PDScratch& scratch,
                                         OnChange&& on_change) {
    scratch.ensure(est.size());
    scratch.heap.clear();
    const std::uint64_t epoch = ++scratch.epoch;
    auto cmp = std::greater<std::pair<double, VertexId>>{};

    std::vector<VertexId> touched;
    touched.reserve(input.size());

    auto enqueue = [&](VertexId v) {
        scratch.in_queue_epoch[v] = epoch;
        scratch.heap.emplace_back(est.d[v], v);
        std::push_heap(scratch.heap.begin(), scratch.heap.end(), cmp);
        touched.push_back(v);
        ++stats.pushes;
    };

    for (VertexId v : input) {
        if (scratch.in_queue_epoch[v] == epoch) continue;  // duplicate input
        enqueue(v);
    }

    auto in_queue = [&](VertexId v) {
        return scratch.in_queue_epoch[v] == epoch && scratch.popped_epoch[v] != epoch;
    };

    while (!scratch.heap.empty()) {
        auto [key, u] = scratch.heap.front();
        std::pop_heap(scratch.heap.begin(), scratch.heap.end(), cmp);
        scratch.heap.pop_back();
        if (scratch.popped_epoch[u] == epoch) continue;  // stale: already popped
        if (key != est.d[u]) continue;                   // stale: key was lowered
        scratch.popped_epoch[u] = epoch;
        ++stats.pops;

        g.for_each_out_edge(u, [&](VertexId v, double w) {
            ++stats.edge_scans;
            double cand = est.d[u] + w;
            if (in_queue(v)) {
                if (cand < est.d[v]) {
                    double old = est.d[v];
                    est.d[v] = cand;
                    scratch.heap.emplace_back(cand, v);
                    std::push_heap(scratch.heap.begin(), scratch.heap.end(), cmp);
                    on_change(v, old);
                }
            } else if (est.d[v] > (1.0 + xi) * cand) {
                double old = est.d[v];
                if (std::isfinite(old)) ++est.drops[v];
                est.d[v] = cand;
                enqueue(v);
                on_change(v, old);
            }
        });
    }
    return touched;
}

template <typename View>
std::vector<VertexId> propagate_dijkstra(const View& g, EstimateVector& est,
                                         std::span<const VertexId> input, double xi,
                                         PDStats& stats, PDScratch& scratch) {
    return propagate_dijkstra(g, est, input, xi, stats, scratch, [](VertexId, double) {});
}

// Insertion handling: when edge (tail, head, w) appears and the head estimate
// exceeds the slack threshold, lower it and propagate from the head.
// Returns the touched set, empty when the guard blocked.
template <typename View, typename OnChange>
std::vector<VertexId> relax_edge_insert(const View& g, EstimateVector& est, VertexId tail,
                                        VertexId head, double w, double xi, PDStats& stats,
                                        PDScratch& scratch, OnChange&& on_change) {
    double cand = est.d[tail] + w;
    if (!(est.d[head] > (1.0 + xi) * cand)) return {};
    double old = est.d[head];
    if (std::isfinite(old)) ++est.drops[head];
    est.d[head] = cand;
    on_change(head, old);
    VertexId start[1] = {head};
    return propagate_dijkstra(g, est, start, xi, stats, scratch,
                              std::forward<OnChange>(on_change));
}

template <typename View>
std::vector<VertexId> relax_edge_insert(const View& g, EstimateVector& est, VertexId tail,
                                        VertexId head, double w, double xi, PDStats& stats,
                                        PDScratch& scratch) {
    return relax_edge_insert(g, est, tail, head, w, xi, stats, scratch, [](VertexId, double) {});
}

// Edges violating d(head) <= (1+xi) * (d(tail) + w). Empty result means the
// slack invariant holds.
template <typename View>
std::vector<std::pair<VertexId, VertexId>> check_slack_invariant(const View& g,
                                                                 const EstimateVector& est,
                                                                 double xi) {
    std::vector<std::pair<VertexId, VertexId>> bad;
    for (VertexId u = 0; u < g.vertex_count(); ++u) {
        g.for_each_out_edge(u, [&](VertexId v, double w) {
            if (est.d[v] > (1.0 + xi) * (est.d[u] + w)) bad.emplace_back(u, v);
        });
    }
    return bad;
}

enum class Direction { forward, reverse };

// Plain adjacency view over a DynGraph, forward or reversed.
class DynGraphView {
  public:
    DynGraphView(const DynGraph& g, Direction dir = Direction::forward) : g_(&g), dir_(dir) {}

    std::size_t vertex_count() const { return g_->order(); }

    template <typename F>
    void for_each_out_edge(VertexId u, F&& f) const {
        if (dir_ == Direction::forward) {
            for (EdgeId e : g_->out_edges(u)) f(g_->edge(e).head, g_->edge(e).current_weight());
        } else {
            for (EdgeId e : g_->in_edges(u)) f(g_->edge(e).tail, g_->edge(e).current_weight());
        }
    }

  private:
    const DynGraph* g_;
    Direction dir_;
};

}  // namespace incsp
