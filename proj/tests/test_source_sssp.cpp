#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "incsp/inc_apsp.hpp"
#include "incsp/instance_gen.hpp"
#include "incsp/oracle.hpp"
#include "incsp/source_sssp.hpp"

using namespace incsp;

namespace {

std::shared_ptr<DynGraph> graph_of(const RandomInstance& inst) {
    auto g = std::make_shared<DynGraph>(inst.graph.order());
    for (const EdgeRecord& e : inst.graph.edges()) {
        g->add_initial_edge(e.tail, e.head, e.current_weight());
    }
    return g;
}

}  // namespace

TEST_CASE("construction computes exact distances, rank zero everywhere") {
    auto g = std::make_shared<DynGraph>(3);
    g->add_initial_edge(0, 1, 2.0);
    g->add_initial_edge(1, 2, 3.0);
    SourceSSSP s(g, 0, 0.25, 10.0);
    CHECK(s.estimate(0) == 0.0);
    CHECK(s.estimate(1) == 2.0);
    CHECK(s.estimate(2) == 5.0);
    CHECK(s.max_rank() == 0);
    CHECK(s.rank_offset() == 0);
    for (VertexId v = 0; v < 3; ++v) CHECK(s.rank(v) == 0);
}

TEST_CASE("unreachable vertices report as such") {
    auto g = std::make_shared<DynGraph>(3);
    g->add_initial_edge(0, 1, 2.0);
    SourceSSSP s(g, 0, 0.25, 10.0);
    CHECK(!s.reachable(2));
    CHECK(s.estimate(2) == kInf);
}

TEST_CASE("initial estimates match the oracle on a random graph") {
    GenParams p;
    p.n = 64;
    p.m0 = 200;
    p.w_max = 50.0;
    p.n_updates = 0;
    p.seed = 21;
    RandomInstance inst = generate_random_sequence(p);
    SourceSSSP s(graph_of(inst), 0, 0.1, p.w_max);
    auto dist = exact_sssp(inst.graph, 0);
    for (VertexId v = 0; v < p.n; ++v) CHECK(s.estimate(v) == dist[v]);
}

TEST_CASE("source_insert guard semantics") {
    auto g = std::make_shared<DynGraph>(2);
    g->add_initial_edge(0, 1, 100.0);
    SourceSSSP s(g, 0, 0.1, 100.0);

    SUBCASE("improving insert lowers the estimate") {
        CHECK(s.source_insert(1, 5.0));
        CHECK(s.estimate(1) == 5.0);
    }
    SUBCASE("insert within slack is ignored but refreshes the stored weight") {
        CHECK(s.source_insert(1, 5.0));
        CHECK(!s.source_insert(1, 4.9));  // 5 <= 1.1 * 4.9
        CHECK(s.estimate(1) == 5.0);
        CHECK(s.shortcut_weight(1) == 4.9);
        CHECK(s.max_rank() <= 1);
    }
    SUBCASE("weight domain is validated") {
        CHECK_THROWS_AS(s.source_insert(1, 0.25), std::invalid_argument);
    }
}

TEST_CASE("random source inserts stay inside the oracle sandwich") {
    GenParams p;
    p.n = 64;
    p.m0 = 180;
    p.w_max = 32.0;
    p.n_updates = 200;
    p.seed = 17;
    p.kind = WorkloadKind::source_only;
    RandomInstance inst = generate_random_sequence(p);

    std::size_t m_final = inst.graph.edge_count() + inst.updates.delta();
    double xi = xi_for_epsilon(0.5, m_final);
    SourceSSSP s(graph_of(inst), 0, xi, p.w_max);
    DynGraph replica(p.n);
    for (const EdgeRecord& e : inst.graph.edges()) {
        replica.add_initial_edge(e.tail, e.head, e.current_weight());
    }

    double cap = std::pow(1.0 + xi, 1.0 + std::log2(static_cast<double>(m_final)));
    for (const Update& u : inst.updates.updates) {
        replica.apply(u);
        s.source_insert(u.head, u.weight);
        auto dist = exact_sssp(replica, 0);
        for (VertexId v = 0; v < p.n; ++v) {
            if (!std::isfinite(dist[v])) {
                CHECK(!s.reachable(v));
                continue;
            }
            CHECK(s.estimate(v) >= dist[v]);
            CHECK(s.estimate(v) <= cap * dist[v]);
        }
        CHECK(s.slack_violations().empty());
        CHECK(s.sync_quiescent());
        CHECK(static_cast<double>(s.max_rank()) <=
              std::log2(static_cast<double>(s.composed_edge_count())));
    }
}

TEST_CASE("synchronize squashes dominated classes") {
    // deg(C_0)=3 vs deg(C_1)=5 style imbalance: one synchronize run merges
    // everything back to rank 0 on this tiny instance.
    auto g = std::make_shared<DynGraph>(4);
    g->add_initial_edge(1, 2, 2.0);
    g->add_initial_edge(2, 3, 2.0);
    g->add_initial_edge(3, 1, 2.0);
    SourceSSSP s(g, 0, 0.1, 10.0);
    s.source_insert(1, 1.0);  // touches the whole cycle
    CHECK(s.sync_quiescent());
    CHECK(static_cast<double>(s.max_rank()) <=
          std::log2(static_cast<double>(s.composed_edge_count())));
}

TEST_CASE("batch_insert honors the certificate contract") {
    GenParams p;
    p.n = 32;
    p.m0 = 100;
    p.w_max = 20.0;
    p.n_updates = 0;
    p.seed = 5;
    RandomInstance inst = generate_random_sequence(p);
    SourceSSSP s(graph_of(inst), 0, 0.05, p.w_max);

    SUBCASE("empty batch only sets the offset") {
        s.batch_insert({}, 3);
        CHECK(s.rank_offset() == 3);
        CHECK(s.max_rank() == 0);
    }
    SUBCASE("guarded batch edge with no improvement leaves estimates alone") {
        auto before = s.estimates().d;
        WeightedEdge e{1, 2, 19.0};
        double prior = s.estimate(2);
        s.batch_insert(std::span(&e, 1), 2);
        CHECK(s.rank_offset() == 2);
        if (std::isfinite(prior)) CHECK(s.estimate(2) <= prior);
        CHECK(s.slack_violations().empty());
    }
    SUBCASE("improving batch edges propagate and stay certified") {
        std::vector<WeightedEdge> batch{{3, 7, 1.0}, {7, 9, 1.0}, {9, 11, 1.0}};
        // alpha = 0 is a valid claim here only because the oracle confirms it
        // below; the structure trusts the caller.
        DynGraph replica(p.n);
        for (const EdgeRecord& e : inst.graph.edges()) {
            replica.add_initial_edge(e.tail, e.head, e.current_weight());
        }
        for (const WeightedEdge& e : batch) {
            replica.apply({UpdateKind::insert, e.tail, e.head, e.weight});
        }
        s.batch_insert(batch, 5);
        CHECK(s.rank_offset() == 5);
        CHECK(s.slack_violations().empty());
        auto dist = exact_sssp(replica, 0);
        double cap = std::pow(1.0 + s.xi(),
                              1.0 + s.rank_offset() +
                                  std::log2(static_cast<double>(s.composed_edge_count())));
        for (VertexId v = 0; v < p.n; ++v) {
            if (!std::isfinite(dist[v])) continue;
            CHECK(s.estimate(v) >= dist[v]);
            CHECK(s.estimate(v) <= cap * dist[v]);
        }
    }
}

TEST_CASE("det_reset restores 0-certification") {
    GenParams p;
    p.n = 24;
    p.m0 = 70;
    p.w_max = 16.0;
    p.n_updates = 60;
    p.seed = 13;
    p.kind = WorkloadKind::source_only;
    RandomInstance inst = generate_random_sequence(p);
    SourceSSSP s(graph_of(inst), 0, 0.2, p.w_max);
    for (const Update& u : inst.updates.updates) s.source_insert(u.head, u.weight);
    // Accumulate offset error artificially, then reset.
    s.batch_insert({}, 12);
    CHECK(s.rank_offset() == 12);
    s.det_reset();
    CHECK(s.rank_offset() == 0);
    CHECK(s.max_rank() == 0);
    CHECK(check_certified(s, 0));
}

TEST_CASE("det_reset on a fresh structure keeps exact estimates") {
    auto g = std::make_shared<DynGraph>(3);
    g->add_initial_edge(0, 1, 2.0);
    g->add_initial_edge(1, 2, 3.0);
    SourceSSSP s(g, 0, 0.25, 10.0);
    auto before = s.estimates().d;
    s.det_reset();
    CHECK(s.estimates().d == before);
    CHECK(check_certified(s, 0));
}

TEST_CASE("rand_reset certifies at lambda with a fixed seed") {
    GenParams p;
    p.n = 32;
    p.m0 = 96;
    p.w_max = 25.0;
    p.n_updates = 80;
    p.seed = 23;
    p.kind = WorkloadKind::source_only;
    RandomInstance inst = generate_random_sequence(p);
    double xi = 0.05;
    SourceSSSP s(graph_of(inst), 0, xi, p.w_max);
    for (const Update& u : inst.updates.updates) s.source_insert(u.head, u.weight);
    s.batch_insert({}, 40);

    std::uint32_t lambda = 16;
    REQUIRE(lambda <= s.ell());
    std::mt19937_64 rng(99);
    s.rand_reset(lambda, rng);
    CHECK(s.rank_offset() == lambda);
    CHECK(check_certified(s, lambda));

    SUBCASE("same seed, same behavior") {
        // Rebuild the same pre-reset state; the sampled Z must match, which
        // shows up as identical estimates afterwards.
        SourceSSSP s2(graph_of(inst), 0, xi, p.w_max);
        for (const Update& u : inst.updates.updates) s2.source_insert(u.head, u.weight);
        s2.batch_insert({}, 40);
        std::mt19937_64 rng2(99);
        s2.rand_reset(lambda, rng2);
        CHECK(s.estimates().d == s2.estimates().d);
    }
    SUBCASE("lambda bounds are enforced") {
        std::mt19937_64 r(1);
        CHECK_THROWS_AS(s.rand_reset(0, r), std::invalid_argument);
        CHECK_THROWS_AS(s.rand_reset(s.ell() + 1, r), std::invalid_argument);
    }
    SUBCASE("lambda = ell boundary terminates and sets the offset") {
        std::mt19937_64 r(2);
        s.rand_reset(s.ell(), r);
        CHECK(s.rank_offset() == s.ell());
        CHECK(s.max_rank() == 0);
    }
}

TEST_CASE("drop and rank accounting hold over a long run") {
    GenParams p;
    p.n = 48;
    p.m0 = 150;
    p.w_max = 64.0;
    p.n_updates = 300;
    p.seed = 31;
    p.kind = WorkloadKind::source_only;
    RandomInstance inst = generate_random_sequence(p);
    std::size_t m_final = inst.graph.edge_count() + inst.updates.delta();
    double xi = xi_for_epsilon(0.5, m_final);
    SourceSSSP s(graph_of(inst), 0, xi, p.w_max);
    for (const Update& u : inst.updates.updates) s.source_insert(u.head, u.weight);

    for (VertexId v = 0; v < p.n; ++v) {
        CHECK(s.estimates().drops[v] <= s.ell());
        CHECK(s.rank_increases(v) <= s.estimates().drops[v]);
    }
    std::uint64_t bound =
        4 * (static_cast<std::uint64_t>(p.n) * s.ell() + s.counters().sync_input_total);
    CHECK(s.stats().pops <= bound);
}

TEST_CASE("check_certified trivial cases") {
    auto g = std::make_shared<DynGraph>(4);
    g->add_initial_edge(0, 1, 2.0);
    g->add_initial_edge(1, 2, 2.0);
    g->add_initial_edge(2, 3, 2.0);
    SourceSSSP s(g, 0, 0.1, 10.0);
    CHECK(check_certified(s, 0));

    s.source_insert(3, 1.0);
    CHECK(check_certified(s, s.max_rank()));
}
