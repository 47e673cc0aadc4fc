#include "incsp/graph.hpp"

#include <algorithm>
#include <cmath>

namespace incsp {

DynGraph::DynGraph(std::size_t n) : out_(n), in_(n) {}

EdgeId DynGraph::push_edge(VertexId u, VertexId v, double w, std::uint32_t t) {
    EdgeId id = static_cast<EdgeId>(edges_.size());
    EdgeRecord rec;
    rec.tail = u;
    rec.head = v;
    rec.history.push_back({t, w});
    edges_.push_back(std::move(rec));
    out_[u].push_back(id);
    in_[v].push_back(id);
    auto key = std::make_pair(u, v);
    auto it = min_edge_.find(key);
    if (it == min_edge_.end() || w < edges_[it->second].current_weight()) {
        min_edge_[key] = id;
    }
    return id;
}

EdgeId DynGraph::add_initial_edge(VertexId u, VertexId v, double w) {
    if (now_ != 0) {
        throw std::logic_error("initial edges must be added before any update");
    }
    if (u >= order() || v >= order()) {
        throw std::invalid_argument("edge endpoint out of range");
    }
    if (!(w == 0.0 || w >= 1.0)) {
        throw std::invalid_argument("weight outside {0} u [1, W]");
    }
    return push_edge(u, v, w, 0);
}

EdgeId DynGraph::apply(const Update& u) {
    if (u.tail >= order() || u.head >= order()) {
        throw std::invalid_argument("update endpoint out of range");
    }
    if (!(u.weight == 0.0 || u.weight >= 1.0)) {
        throw std::invalid_argument("weight outside {0} u [1, W]");
    }
    std::uint32_t t = now_ + 1;
    if (u.kind == UpdateKind::insert) {
        now_ = t;
        return push_edge(u.tail, u.head, u.weight, t);
    }
    auto it = min_edge_.find({u.tail, u.head});
    if (it == min_edge_.end()) {
        throw std::invalid_argument("decrease of nonexistent edge (" + std::to_string(u.tail) +
                                    "," + std::to_string(u.head) + ")");
    }
    EdgeRecord& rec = edges_[it->second];
    if (u.weight >= rec.current_weight()) {
        throw std::invalid_argument("decrease does not lower weight of (" +
                                    std::to_string(u.tail) + "," + std::to_string(u.head) +
                                    "): " + std::to_string(rec.current_weight()) + " -> " +
                                    std::to_string(u.weight));
    }
    now_ = t;
    rec.history.push_back({t, u.weight});
    return it->second;
}

double DynGraph::weight_at(EdgeId e, std::uint32_t t) const {
    const auto& h = edges_[e].history;
    // Latest event with time <= t.
    auto it = std::upper_bound(h.begin(), h.end(), t,
                               [](std::uint32_t x, const WeightEvent& ev) { return x < ev.time; });
    if (it == h.begin()) return kInf;
    return std::prev(it)->weight;
}

double DynGraph::pair_min_weight(VertexId u, VertexId v) const {
    auto it = min_edge_.find({u, v});
    if (it == min_edge_.end()) return kInf;
    return edges_[it->second].current_weight();
}

void DynGraph::validate() const {
    std::vector<std::size_t> out_seen(order(), 0), in_seen(order(), 0);
    for (EdgeId e = 0; e < edges_.size(); ++e) {
        const auto& rec = edges_[e];
        if (rec.tail >= order() || rec.head >= order()) {
            throw std::logic_error("edge endpoint out of range");
        }
        if (rec.history.empty()) throw std::logic_error("edge with empty history");
        for (std::size_t i = 0; i < rec.history.size(); ++i) {
            double w = rec.history[i].weight;
            if (!(w == 0.0 || w >= 1.0)) throw std::logic_error("history weight out of domain");
            if (i > 0) {
                if (rec.history[i].time <= rec.history[i - 1].time) {
                    throw std::logic_error("history timestamps not increasing");
                }
                if (rec.history[i].weight >= rec.history[i - 1].weight) {
                    throw std::logic_error("history weights not decreasing");
                }
            }
        }
        ++out_seen[rec.tail];
        ++in_seen[rec.head];
    }
    for (VertexId v = 0; v < order(); ++v) {
        if (out_seen[v] != out_[v].size() || in_seen[v] != in_[v].size()) {
            throw std::logic_error("adjacency lists inconsistent with edge records");
        }
        for (EdgeId e : out_[v]) {
            if (edges_[e].tail != v) throw std::logic_error("out adjacency tail mismatch");
        }
        for (EdgeId e : in_[v]) {
            if (edges_[e].head != v) throw std::logic_error("in adjacency head mismatch");
        }
    }
}

void DecreaseFilter::seed(const DynGraph& g) {
    for (const EdgeRecord& rec : g.edges()) {
        auto key = std::make_pair(rec.tail, rec.head);
        auto it = recorded_.find(key);
        double w = rec.current_weight();
        if (it == recorded_.end() || w < it->second) recorded_[key] = w;
    }
}

bool DecreaseFilter::admit(const Update& u) {
    auto key = std::make_pair(u.tail, u.head);
    auto it = recorded_.find(key);
    if (u.kind == UpdateKind::insert) {
        if (it == recorded_.end() || u.weight < it->second) recorded_[key] = u.weight;
        return true;
    }
    if (it == recorded_.end()) {
        // Decrease of an edge the filter never saw; record and keep.
        recorded_[key] = u.weight;
        return true;
    }
    if (u.weight * (1.0 + eps_) < it->second) {
        it->second = u.weight;
        return true;
    }
    return false;
}

double DecreaseFilter::recorded(VertexId u, VertexId v) const {
    auto it = recorded_.find({u, v});
    return it == recorded_.end() ? kInf : it->second;
}

UpdateSequence filter_decreases(const DynGraph& base, const UpdateSequence& seq, double eps) {
    DecreaseFilter filter(eps);
    filter.seed(base);
    UpdateSequence out;
    for (const Update& u : seq.updates) {
        if (filter.admit(u)) out.updates.push_back(u);
    }
    return out;
}

}  // namespace incsp
