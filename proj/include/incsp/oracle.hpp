#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "incsp/graph.hpp"
#include "incsp/propagate.hpp"
#include "incsp/source_sssp.hpp"

namespace incsp {

// Exact Dijkstra over any propagation view. Ground truth for every derived
// expectation; independent of the incremental structures' code paths except
// for the adjacency iteration itself.
template <typename View>
std::vector<double> exact_sssp_view(const View& g, VertexId s) {
    std::vector<double> dist(g.vertex_count(), kInf);
    std::vector<std::pair<double, VertexId>> heap;
    auto cmp = std::greater<std::pair<double, VertexId>>{};
    dist[s] = 0.0;
    heap.emplace_back(0.0, s);
    while (!heap.empty()) {
        auto [key, u] = heap.front();
        std::pop_heap(heap.begin(), heap.end(), cmp);
        heap.pop_back();
        if (key != dist[u]) continue;
        g.for_each_out_edge(u, [&](VertexId v, double w) {
            double cand = key + w;
            if (cand < dist[v]) {
                dist[v] = cand;
                heap.emplace_back(cand, v);
                std::push_heap(heap.begin(), heap.end(), cmp);
            }
        });
    }
    return dist;
}

std::vector<double> exact_sssp(const DynGraph& g, VertexId s,
                               Direction dir = Direction::forward);

// Distances in version G^t (edges filtered through their weight history).
std::vector<double> exact_sssp_at(const DynGraph& g, VertexId s, std::uint32_t t,
                                  Direction dir = Direction::forward);

// Distances from s in g with vertex `banned` removed.
std::vector<double> exact_sssp_excluding(const DynGraph& g, VertexId s, VertexId banned,
                                         Direction dir = Direction::forward);

// Independent second oracle for cross-validation.
std::vector<double> bellman_ford(const DynGraph& g, VertexId s,
                                 Direction dir = Direction::forward);

// All-pairs exact distances of the current graph, one Dijkstra per source.
std::vector<std::vector<double>> exact_apsp(const DynGraph& g);

// k-certification of every vertex of a SourceSSSP: for all u, v,
//   d(v) <= (1+xi)^k * (d(u) + dist_{G - s}(u, v)),
// with distances in the structure's base graph (its orientation) minus the
// source; the shortcuts all leave the source, so they drop out. One Dijkstra
// per finite-estimate u. Equivalent to the per-path definition because the
// binding path is a shortest path.
bool check_certified(const SourceSSSP& ds, std::uint32_t k);

struct CheckRecord {
    std::string check;
    std::string location;
    double expected = 0.0;
    double observed = 0.0;
    bool pass = true;
};

struct OracleReport {
    std::vector<CheckRecord> records;
    std::size_t checks_run = 0;
    std::optional<std::size_t> first_violation_update;

    bool ok() const { return records.empty(); }
    void fail(std::string check, std::string location, double expected, double observed,
              std::size_t update_index) {
        records.push_back({std::move(check), std::move(location), expected, observed, false});
        if (!first_violation_update) first_violation_update = update_index;
    }
    void write_json_lines(std::ostream& os) const;
};

}  // namespace incsp
