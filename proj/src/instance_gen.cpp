#include "incsp/instance_gen.hpp"

#include <algorithm>
#include <cmath>

namespace incsp {

namespace {

double draw_weight(std::mt19937_64& rng, const GenParams& p) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    if (p.zero_weight_prob > 0.0 && coin(rng) < p.zero_weight_prob) return 0.0;
    std::uniform_int_distribution<long long> w(1, std::max<long long>(1, llround(p.w_max)));
    return static_cast<double>(w(rng));
}

}  // namespace

RandomInstance generate_random_sequence(const GenParams& p) {
    if (p.n == 0) throw std::invalid_argument("generator needs n >= 1");
    std::mt19937_64 rng(p.seed);
    std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(p.n - 1));
    std::uniform_real_distribution<double> coin(0.0, 1.0);

    RandomInstance inst{DynGraph(p.n), {}};
    // Tracks current pair-min weights so decreases can be issued validly.
    std::map<std::pair<VertexId, VertexId>, double> pair_min;

    auto random_pair = [&](VertexId forced_tail, bool use_forced) {
        VertexId u = use_forced ? forced_tail : pick(rng);
        VertexId v = pick(rng);
        while (p.n > 1 && v == u) v = pick(rng);
        return std::make_pair(u, v);
    };

    auto note = [&](VertexId u, VertexId v, double w) {
        auto key = std::make_pair(u, v);
        auto it = pair_min.find(key);
        if (it == pair_min.end() || w < it->second) pair_min[key] = w;
    };

    bool forced = p.kind == WorkloadKind::source_only;
    for (std::size_t i = 0; i < p.m0; ++i) {
        auto [u, v] = random_pair(p.source, false);
        double w = draw_weight(rng, p);
        inst.graph.add_initial_edge(u, v, w);
        note(u, v, w);
    }

    std::vector<std::pair<VertexId, VertexId>> decreasable;
    auto refresh_decreasable = [&]() {
        decreasable.clear();
        for (const auto& [key, w] : pair_min) {
            if (forced && key.first != p.source) continue;
            if (w >= 2.0) decreasable.push_back(key);
        }
    };

    for (std::size_t i = 0; i < p.n_updates; ++i) {
        bool try_decrease = coin(rng) < p.decrease_prob;
        Update u;
        if (try_decrease) {
            refresh_decreasable();
            if (!decreasable.empty()) {
                std::uniform_int_distribution<std::size_t> pick_edge(0, decreasable.size() - 1);
                auto key = decreasable[pick_edge(rng)];
                double cur = pair_min[key];
                std::uniform_int_distribution<long long> lower(1, llround(cur) - 1);
                u.kind = UpdateKind::decrease;
                u.tail = key.first;
                u.head = key.second;
                u.weight = static_cast<double>(lower(rng));
                inst.updates.updates.push_back(u);
                pair_min[key] = u.weight;
                continue;
            }
        }
        auto [t, h] = random_pair(p.source, forced);
        u.kind = UpdateKind::insert;
        u.tail = t;
        u.head = h;
        u.weight = draw_weight(rng, p);
        inst.updates.updates.push_back(u);
        note(t, h, u.weight);
    }
    return inst;
}

}  // namespace incsp
