#include "incsp/offline_sssp.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>

#include "incsp/oracle.hpp"

namespace incsp {

void EstimateCollection::store(VertexId v, std::uint32_t t, double est) {
    auto& run = per_vertex_[v];
    auto it = std::upper_bound(run.begin(), run.end(), t,
                               [](std::uint32_t x, const Entry& e) { return x < e.time; });
    run.insert(it, Entry{t, est});
}

double EstimateCollection::prefix_min(VertexId v, std::uint32_t t) const {
    double best = kInf;
    for (const Entry& e : per_vertex_[v]) {
        if (e.time > t) break;
        best = std::min(best, e.estimate);
    }
    return best;
}

double EstimateCollection::suffix_max(VertexId v, std::uint32_t t) const {
    double best = -kInf;
    for (const Entry& e : per_vertex_[v]) {
        if (e.time >= t) best = std::max(best, e.estimate);
    }
    return best;
}

OfflineSSSP::OfflineSSSP(const DynGraph& g0, const UpdateSequence& seq, VertexId source,
                         double eps, double w_max)
    : n_(g0.order()),
      source_(source),
      eps_(eps),
      w_max_(w_max),
      delta_(static_cast<std::uint32_t>(seq.delta())),
      estimates_(g0.order()) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0,1)");
    if (source >= n_) throw std::invalid_argument("source out of range");
    xi_ = std::max(std::ldexp(1.0, -20),
                   eps_ / (2.0 * std::max(1.0, std::log2(std::max<std::uint32_t>(1, delta_))) + 2.0));
    build(g0, seq);
}

void OfflineSSSP::build(const DynGraph& g0, const UpdateSequence& seq) {
    // Full weight-history replica plus the n virtual source edges of weight
    // nW that make every vertex reachable for the recursion.
    history_ = std::make_shared<DynGraph>(n_);
    const double virtual_w = static_cast<double>(n_) * w_max_;
    for (const EdgeRecord& e : g0.edges()) {
        history_->add_initial_edge(e.tail, e.head, e.current_weight());
    }
    for (VertexId v = 0; v < n_; ++v) history_->add_initial_edge(source_, v, virtual_w);
    for (const Update& u : seq.updates) history_->apply(u);

    // Reachability sidecar over the real edges: reach_time_[v] is the first
    // version in which v is reachable from the source.
    constexpr std::uint32_t kNever = 0xffffffffu;
    reach_time_.assign(n_, kNever);
    {
        std::vector<std::vector<std::pair<VertexId, VertexId>>> out(n_);  // (head, unused)
        std::vector<std::vector<VertexId>> adj(n_);
        auto flood = [&](VertexId start, std::uint32_t t) {
            if (reach_time_[start] != kNever) return;
            std::vector<VertexId> stack{start};
            reach_time_[start] = t;
            while (!stack.empty()) {
                VertexId u = stack.back();
                stack.pop_back();
                for (VertexId h : adj[u]) {
                    if (reach_time_[h] == kNever) {
                        reach_time_[h] = t;
                        stack.push_back(h);
                    }
                }
            }
        };
        for (const EdgeRecord& e : g0.edges()) adj[e.tail].push_back(e.head);
        flood(source_, 0);
        // Vertices reachable in G^0 but flooded through intermediate hops get
        // time 0 via the DFS above; replay handles later versions.
        std::uint32_t t = 0;
        for (const Update& u : seq.updates) {
            ++t;
            if (u.kind != UpdateKind::insert) continue;
            adj[u.tail].push_back(u.head);
            if (reach_time_[u.tail] <= t && reach_time_[u.head] == kNever) flood(u.head, t);
        }
    }

    auto d0 = exact_sssp_at(*history_, source_, 0);
    for (VertexId v = 0; v < n_; ++v) estimates_.store(v, 0, d0[v]);
    if (delta_ > 0) {
        auto dD = exact_sssp_at(*history_, source_, delta_);
        for (VertexId v = 0; v < n_; ++v) estimates_.store(v, delta_, dD[v]);
    }

    std::vector<VertexId> everyone(n_);
    for (VertexId v = 0; v < n_; ++v) everyone[v] = v;
    costly_calls_.assign(n_, 0);
    if (delta_ > 0) search(0, delta_, everyone, 0);
}

void OfflineSSSP::search(std::uint32_t alpha, std::uint32_t beta,
                         const std::vector<VertexId>& candidates, std::uint32_t depth) {
    if (alpha > beta) return;
    ++search_calls_;
    max_depth_ = std::max(max_depth_, depth);

    // Only the parent's X can re-qualify; scanning candidates keeps the total
    // X-construction cost proportional to the costly-call counts.
    std::vector<VertexId> x;
    for (VertexId u : candidates) {
        if (estimates_.prefix_min(u, alpha) > (1.0 + xi_) * estimates_.suffix_max(u, beta)) {
            x.push_back(u);
        }
    }
    std::uint32_t gamma = alpha + (beta - alpha) / 2;

    if (!x.empty()) {
        for (VertexId v : x) ++costly_calls_[v];

        std::vector<char> in_x(n_, 0);
        std::vector<std::uint32_t> pos(n_, 0);
        for (std::size_t i = 0; i < x.size(); ++i) {
            in_x[x[i]] = 1;
            pos[x[i]] = static_cast<std::uint32_t>(i);
        }

        // d_init(v): best entry into X through an edge of G^gamma from a
        // settled-outside vertex; the virtual source edges keep it finite.
        std::vector<double> dist(x.size(), kInf);
        for (std::size_t i = 0; i < x.size(); ++i) {
            VertexId v = x[i];
            for (EdgeId e : history_->in_edges(v)) {
                VertexId u = history_->edge(e).tail;
                if (in_x[u]) continue;
                double w = history_->weight_at(e, gamma);
                if (!std::isfinite(w)) continue;
                dist[i] = std::min(dist[i], estimates_.prefix_min(u, alpha) + w);
            }
        }

        std::vector<std::pair<double, VertexId>> heap;
        auto cmp = std::greater<std::pair<double, VertexId>>{};
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (std::isfinite(dist[i])) heap.emplace_back(dist[i], x[i]);
        }
        std::make_heap(heap.begin(), heap.end(), cmp);
        while (!heap.empty()) {
            auto [key, u] = heap.front();
            std::pop_heap(heap.begin(), heap.end(), cmp);
            heap.pop_back();
            if (key != dist[pos[u]]) continue;
            ++dijkstra_pops_;
            for (EdgeId e : history_->out_edges(u)) {
                VertexId h = history_->edge(e).head;
                if (!in_x[h]) continue;
                double w = history_->weight_at(e, gamma);
                if (!std::isfinite(w)) continue;
                if (key + w < dist[pos[h]]) {
                    dist[pos[h]] = key + w;
                    heap.emplace_back(key + w, h);
                    std::push_heap(heap.begin(), heap.end(), cmp);
                }
            }
        }
        for (std::size_t i = 0; i < x.size(); ++i) estimates_.store(x[i], gamma, dist[i]);
    }

    if (gamma > alpha) search(alpha, gamma - 1, x, depth + 1);
    if (gamma < beta) search(gamma + 1, beta, x, depth + 1);
}

double OfflineSSSP::query(VertexId v, std::uint32_t j) const {
    if (v >= n_) throw std::out_of_range("vertex out of range");
    if (j > delta_) throw std::out_of_range("version out of range");
    if (reach_time_[v] > j) return kInf;
    return estimates_.prefix_min(v, j);
}

void OfflineSSSP::save(std::ostream& os) const {
    os << std::setprecision(17);
    os << n_ << " " << delta_ << " " << xi_ << " " << w_max_ << " " << source_ << " " << eps_
       << "\n";
    for (VertexId v = 0; v < n_; ++v) {
        auto run = estimates_.entries(v);
        os << v << " " << reach_time_[v] << " " << run.size();
        for (const auto& e : run) os << " " << e.time << " " << e.estimate;
        os << "\n";
    }
}

OfflineSSSP OfflineSSSP::load(std::istream& is) {
    OfflineSSSP o;
    std::size_t n = 0;
    if (!(is >> n >> o.delta_ >> o.xi_ >> o.w_max_ >> o.source_ >> o.eps_)) {
        throw std::invalid_argument("malformed offline index header");
    }
    o.n_ = n;
    o.estimates_ = EstimateCollection(n);
    o.reach_time_.assign(n, 0);
    o.costly_calls_.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        VertexId v;
        std::size_t count;
        if (!(is >> v >> o.reach_time_[i] >> count) || v != i) {
            throw std::invalid_argument("malformed offline index row");
        }
        for (std::size_t j = 0; j < count; ++j) {
            std::uint32_t t;
            double est;
            if (!(is >> t >> est)) throw std::invalid_argument("malformed offline index entry");
            o.estimates_.store(v, t, est);
        }
    }
    return o;
}

}  // namespace incsp
