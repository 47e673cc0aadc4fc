#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "incsp/instance_gen.hpp"
#include "incsp/io.hpp"
#include "incsp/verify.hpp"

using namespace incsp;

namespace {

Instance make_instance(std::size_t n, std::size_t m0, std::size_t updates, double w,
                       std::uint64_t seed) {
    GenParams p;
    p.n = n;
    p.m0 = m0;
    p.w_max = w;
    p.n_updates = updates;
    p.seed = seed;
    RandomInstance ri = generate_random_sequence(p);
    Instance inst;
    inst.n = n;
    for (const EdgeRecord& e : ri.graph.edges()) {
        inst.initial_edges.push_back({e.tail, e.head, e.current_weight()});
    }
    for (const Update& u : ri.updates.updates) inst.items.emplace_back(u);
    return inst;
}

}  // namespace

TEST_CASE("parameter instantiation") {
    DynGraph g(4);
    g.add_initial_edge(0, 1, 2.0);
    IncAPSP x(g, 0.5, ApspVariant::deterministic, 1, 10.0, 8);
    const auto& par = x.params();
    CHECK(par.b == 2);  // ceil(sqrt(4))
    CHECK(par.p >= 1);
    CHECK(par.xi >= std::ldexp(1.0, -20));
    CHECK(par.xi <= 0.5 / 10.0);
    CHECK(par.rho_star == 0);

    IncAPSP r(g, 0.5, ApspVariant::randomized, 1, 10.0, 8);
    CHECK(r.params().rho_star >= 1);
    CHECK_THROWS_AS(IncAPSP(g, 1.5, ApspVariant::deterministic, 1, 10.0, 8),
                    std::invalid_argument);
}

TEST_CASE("initialization matches the oracle per source") {
    Instance inst = make_instance(12, 40, 0, 10.0, 3);
    DynGraph g0 = inst.build_initial_graph();
    IncAPSP x(g0, 0.5, ApspVariant::deterministic, 1, 10.0, inst.final_edge_count());
    for (VertexId s = 0; s < 12; ++s) {
        auto dist = exact_sssp(g0, s);
        for (VertexId t = 0; t < 12; ++t) {
            CHECK(x.query(s, t) == dist[t]);
        }
    }
}

TEST_CASE("first update of a phase populates V_cur and the dense component") {
    DynGraph g(4);
    g.add_initial_edge(2, 3, 4.0);
    IncAPSP x(g, 0.5, ApspVariant::deterministic, 1, 10.0, 20);
    x.update({UpdateKind::insert, 0, 1, 2.0});
    if (x.phase_edges() > 0) {  // phase may have closed if b == 1
        CHECK(x.in_v_cur(0));
        CHECK(x.in_v_cur(1));
        CHECK(x.dense_estimate(0, 1) <= 2.0);
    }
    CHECK(x.query(0, 1) == 2.0);
}

TEST_CASE("filtered-out decreases change nothing") {
    DynGraph g(3);
    g.add_initial_edge(0, 1, 8.0);
    IncAPSP x(g, 0.4, ApspVariant::deterministic, 1, 10.0, 10);
    // eps/4 = 0.1: 7.9 * 1.1 > 8 means the decrease is dropped.
    std::uint64_t before = x.updates_applied();
    x.update({UpdateKind::decrease, 0, 1, 7.9});
    CHECK(x.updates_applied() == before);
    CHECK(x.updates_filtered() == 1);
    CHECK(x.query(0, 1) == 8.0);
}

TEST_CASE("phase arithmetic: offset follows rho* + k * alpha_step") {
    Instance inst = make_instance(9, 20, 60, 10.0, 5);
    DynGraph g0 = inst.build_initial_graph();
    IncAPSP x(g0, 0.5, ApspVariant::deterministic, 1, 10.0, inst.final_edge_count());
    for (const InstanceItem& item : inst.items) {
        if (const Update* u = std::get_if<Update>(&item)) {
            x.update(*u);
            CHECK(x.rank_offset() ==
                  x.params().rho_star + x.phases_since_reset() * x.params().alpha_step);
            CHECK(x.phases_since_reset() < x.params().p);
            for (VertexId s = 0; s < 9; ++s) {
                CHECK(x.forward_structure(s).rank_offset() == x.rank_offset());
                CHECK(x.reverse_structure(s).rank_offset() == x.rank_offset());
            }
        }
    }
}

TEST_CASE("deterministic replay stays inside the sandwich with full checks") {
    Instance inst = make_instance(12, 30, 90, 10.0, 7);
    VerifyOptions opt;
    opt.eps = 0.5;
    opt.variant = ApspVariant::deterministic;
    opt.check_every = 1;
    OracleReport rep = verify_apsp_replay(inst, opt);
    if (!rep.ok()) {
        for (const auto& r : rep.records) {
            MESSAGE(r.check, " at ", r.location, " expected ", r.expected, " observed ",
                    r.observed);
        }
    }
    CHECK(rep.ok());
}

TEST_CASE("randomized replay stays inside the sandwich") {
    Instance inst = make_instance(10, 24, 70, 10.0, 9);
    VerifyOptions opt;
    opt.eps = 0.5;
    opt.variant = ApspVariant::randomized;
    opt.seed = 1234;
    opt.check_every = 4;
    OracleReport rep = verify_apsp_replay(inst, opt);
    CHECK(rep.ok());
}

TEST_CASE("same seed, same answers in the randomized variant") {
    Instance inst = make_instance(10, 24, 60, 10.0, 11);
    DynGraph a0 = inst.build_initial_graph();
    DynGraph b0 = inst.build_initial_graph();
    IncAPSP a(a0, 0.5, ApspVariant::randomized, 77, 10.0, inst.final_edge_count());
    IncAPSP b(b0, 0.5, ApspVariant::randomized, 77, 10.0, inst.final_edge_count());
    for (const InstanceItem& item : inst.items) {
        if (const Update* u = std::get_if<Update>(&item)) {
            a.update(*u);
            b.update(*u);
        }
    }
    for (VertexId s = 0; s < 10; ++s) {
        for (VertexId t = 0; t < 10; ++t) CHECK(a.query(s, t) == b.query(s, t));
    }
}

TEST_CASE("event propagation is a fixpoint: re-quiescing is a no-op") {
    // After update() returns, all invariants hold and re-running the drain
    // (via a redundant zero-effect update) leaves every estimate alone.
    Instance inst = make_instance(8, 20, 20, 10.0, 13);
    DynGraph g0 = inst.build_initial_graph();
    IncAPSP x(g0, 0.5, ApspVariant::deterministic, 1, 10.0, inst.final_edge_count() + 1);
    for (const InstanceItem& item : inst.items) {
        if (const Update* u = std::get_if<Update>(&item)) x.update(*u);
    }
    std::vector<double> before;
    for (VertexId s = 0; s < 8; ++s) {
        for (VertexId t = 0; t < 8; ++t) before.push_back(x.query(s, t));
    }
    // An insert dominated by existing estimates: kept by the filter as an
    // insert, but no estimate can move.
    double w = x.query(0, 1);
    if (std::isfinite(w) && w >= 1.0) {
        x.update({UpdateKind::insert, 0, 1, std::floor(w) == 0.0 ? 1.0 : std::floor(w)});
        std::size_t i = 0;
        for (VertexId s = 0; s < 8; ++s) {
            for (VertexId t = 0; t < 8; ++t) {
                CHECK(x.query(s, t) <= before[i]);
                ++i;
            }
        }
    }
}

TEST_CASE("every batch insertion satisfies its certificate precondition") {
    // At phase close, each structure's estimates must already be within
    // (1+xi)^alpha of the distances in its own graph plus the batch.
    Instance inst = make_instance(10, 25, 70, 10.0, 21);
    DynGraph g0 = inst.build_initial_graph();
    IncAPSP x(g0, 0.5, ApspVariant::deterministic, 1, 10.0, inst.final_edge_count());
    std::size_t batches_checked = 0;
    x.before_batch = [&](std::span<const WeightedEdge> batch, std::uint32_t alpha) {
        ++batches_checked;
        double cap = std::pow(1.0 + x.params().xi, static_cast<double>(alpha));
        for (VertexId s = 0; s < x.order(); ++s) {
            for (int dir = 0; dir < 2; ++dir) {
                const SourceSSSP& ds =
                    dir == 0 ? x.forward_structure(s) : x.reverse_structure(s);
                // Probe graph: the structure's composed graph plus the batch,
                // in the structure's orientation.
                DynGraph probe(x.order());
                auto view = ds.composed_view();
                for (VertexId u = 0; u < x.order(); ++u) {
                    view.for_each_out_edge(
                        u, [&](VertexId v, double w) { probe.add_initial_edge(u, v, w); });
                }
                for (const WeightedEdge& e : batch) {
                    VertexId t = dir == 0 ? e.tail : e.head;
                    VertexId h = dir == 0 ? e.head : e.tail;
                    probe.add_initial_edge(t, h, e.weight);
                }
                auto dist = exact_sssp(probe, s);
                for (VertexId v = 0; v < x.order(); ++v) {
                    if (!std::isfinite(dist[v])) continue;
                    CHECK(ds.estimate(v) <= cap * dist[v]);
                }
            }
        }
    };
    for (const InstanceItem& item : inst.items) {
        if (const Update* u = std::get_if<Update>(&item)) x.update(*u);
    }
    REQUIRE(batches_checked > 0);
}

TEST_CASE("shortcut trigger counts respect the drop quantization") {
    Instance inst = make_instance(10, 25, 80, 10.0, 15);
    DynGraph g0 = inst.build_initial_graph();
    IncAPSP x(g0, 0.5, ApspVariant::deterministic, 1, 10.0, inst.final_edge_count());
    for (const InstanceItem& item : inst.items) {
        if (const Update* u = std::get_if<Update>(&item)) x.update(*u);
    }
    for (VertexId s = 0; s < 10; ++s) {
        const SourceSSSP& f = x.forward_structure(s);
        const SourceSSSP& r = x.reverse_structure(s);
        for (VertexId t = 0; t < 10; ++t) {
            CHECK(f.shortcut_triggers(t) <= f.ell() + 1);
            CHECK(r.shortcut_triggers(t) <= r.ell() + 1);
        }
    }
}

TEST_CASE("deterministic resets leave structures 0-certified") {
    Instance inst = make_instance(8, 16, 0, 10.0, 17);
    DynGraph g0 = inst.build_initial_graph();
    IncAPSP x(g0, 0.5, ApspVariant::deterministic, 1, 10.0, 60);
    std::size_t resets_checked = 0;
    x.after_structure_reset = [&](const SourceSSSP& s) {
        ++resets_checked;
        CHECK(check_certified(s, 0));
        CHECK(s.rank_offset() == 0);
    };
    GenParams p;
    p.n = 8;
    p.m0 = 0;
    p.w_max = 10.0;
    p.n_updates = 60;
    p.seed = 18;
    RandomInstance more = generate_random_sequence(p);
    for (const Update& u : more.updates.updates) x.update(u);
    REQUIRE(x.resets_performed() > 0);
    CHECK(resets_checked > 0);
    // After a reset the phase counter restarts, so the next close uses the
    // offset rho* + alpha_step again.
    CHECK(x.rank_offset() == x.params().rho_star + x.phases_since_reset() * x.params().alpha_step);
}

TEST_CASE("edge workloads: pure decreases, zero-heavy weights, tiny n") {
    VerifyOptions opt;
    opt.eps = 0.5;
    opt.check_every = 3;

    SUBCASE("decrease-only sequence") {
        GenParams p;
        p.n = 10;
        p.m0 = 60;
        p.w_max = 200.0;
        p.n_updates = 80;
        p.seed = 71;
        p.decrease_prob = 1.0;
        p.zero_weight_prob = 0.0;
        RandomInstance ri = generate_random_sequence(p);
        Instance inst;
        inst.n = p.n;
        for (const EdgeRecord& e : ri.graph.edges()) {
            inst.initial_edges.push_back({e.tail, e.head, e.current_weight()});
        }
        std::size_t decreases = 0;
        for (const Update& u : ri.updates.updates) {
            decreases += u.kind == UpdateKind::decrease;
            inst.items.emplace_back(u);
        }
        REQUIRE(decreases > 40);
        CHECK(verify_apsp_replay(inst, opt).ok());
    }
    SUBCASE("half the weights are zero") {
        GenParams p;
        p.n = 12;
        p.m0 = 30;
        p.w_max = 10.0;
        p.n_updates = 70;
        p.seed = 73;
        p.zero_weight_prob = 0.5;
        RandomInstance ri = generate_random_sequence(p);
        Instance inst;
        inst.n = p.n;
        for (const EdgeRecord& e : ri.graph.edges()) {
            inst.initial_edges.push_back({e.tail, e.head, e.current_weight()});
        }
        for (const Update& u : ri.updates.updates) inst.items.emplace_back(u);
        opt.variant = ApspVariant::randomized;
        opt.seed = 3;
        CHECK(verify_apsp_replay(inst, opt).ok());
    }
    SUBCASE("n = 4 with rapid phase cycling") {
        Instance inst = make_instance(4, 10, 120, 10.0, 79);
        opt.check_every = 1;
        CHECK(verify_apsp_replay(inst, opt).ok());
        opt.variant = ApspVariant::randomized;
        opt.seed = 11;
        CHECK(verify_apsp_replay(inst, opt).ok());
    }
}

TEST_CASE("adaptive adversary finds no violations") {
    Instance inst = make_instance(10, 30, 0, 10.0, 19);
    DynGraph replica = inst.build_initial_graph();
    DynGraph g0 = inst.build_initial_graph();

    SUBCASE("randomized variant") {
        IncAPSP x(g0, 0.5, ApspVariant::randomized, 5, 10.0, inst.final_edge_count() + 30);
        std::mt19937_64 rng(5);
        OracleReport rep = adaptive_adversary(x, replica, 30, 0.5, rng);
        CHECK(rep.ok());
    }
    SUBCASE("deterministic variant is trivially safe") {
        IncAPSP x(g0, 0.5, ApspVariant::deterministic, 5, 10.0, inst.final_edge_count() + 30);
        std::mt19937_64 rng(5);
        OracleReport rep = adaptive_adversary(x, replica, 30, 0.5, rng);
        CHECK(rep.ok());
    }
    SUBCASE("custom strategy: chain-building attack") {
        // Repeatedly extends a cheap chain through fresh vertices, the shape
        // that maximizes certificate churn.
        IncAPSP x(g0, 0.5, ApspVariant::randomized, 5, 10.0, inst.final_edge_count() + 40);
        std::mt19937_64 rng(5);
        VertexId next = 0;
        auto chain = [&](const IncAPSP& a, const std::vector<std::vector<double>>&,
                         std::mt19937_64&) {
            VertexId u = next;
            next = (next + 1) % static_cast<VertexId>(a.order());
            return Update{UpdateKind::insert, u, next, 1.0};
        };
        OracleReport rep = adaptive_adversary(x, replica, 40, 0.5, rng, chain);
        CHECK(rep.ok());
    }
}
