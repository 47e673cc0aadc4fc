#include "incsp/verify.hpp"

#include <algorithm>
#include <cmath>

namespace incsp {

namespace {

std::string pair_loc(std::size_t upd, VertexId u, VertexId v) {
    return "update " + std::to_string(upd) + " pair (" + std::to_string(u) + "," +
           std::to_string(v) + ")";
}

std::string vertex_loc(std::size_t upd, VertexId v) {
    return "update " + std::to_string(upd) + " vertex " + std::to_string(v);
}

// Structural checks shared by the SSSP and APSP verifiers.
void check_structure_state(const SourceSSSP& s, std::size_t upd, const std::string& tag,
                           OracleReport& rep) {
    ++rep.checks_run;
    auto bad = s.slack_violations();
    if (!bad.empty()) {
        rep.fail("slack-invariant", tag + " edge (" + std::to_string(bad[0].first) + "," +
                                        std::to_string(bad[0].second) + ") at update " +
                                        std::to_string(upd),
                 0.0, static_cast<double>(bad.size()), upd);
    }
    if (!s.sync_quiescent()) {
        rep.fail("rank-degree-condition", tag + " at update " + std::to_string(upd), 1.0, 0.0,
                 upd);
    }
    double log2m = std::log2(static_cast<double>(std::max<std::size_t>(2, s.composed_edge_count())));
    if (static_cast<double>(s.max_rank()) > log2m) {
        rep.fail("rank-bound", tag + " at update " + std::to_string(upd), log2m,
                 static_cast<double>(s.max_rank()), upd);
    }
    for (VertexId v = 0; v < s.estimates().size(); ++v) {
        if (s.estimates().drops[v] > s.ell()) {
            rep.fail("drop-bound", tag + " " + vertex_loc(upd, v),
                     static_cast<double>(s.ell()), static_cast<double>(s.estimates().drops[v]),
                     upd);
        }
        if (s.rank_increases(v) > s.estimates().drops[v]) {
            rep.fail("rank-increase-accounting", tag + " " + vertex_loc(upd, v),
                     static_cast<double>(s.estimates().drops[v]),
                     static_cast<double>(s.rank_increases(v)), upd);
        }
    }
}

void check_sandwich(const SourceSSSP& s, const std::vector<double>& dist, double eps,
                    std::size_t upd, const std::string& tag, OracleReport& rep) {
    ++rep.checks_run;
    for (VertexId v = 0; v < dist.size(); ++v) {
        double est = s.estimate(v);
        if (!std::isfinite(dist[v])) {
            if (std::isfinite(est)) {
                rep.fail("reachability", tag + " " + vertex_loc(upd, v), kInf, est, upd);
            }
            continue;
        }
        if (!std::isfinite(est)) {
            rep.fail("reachability", tag + " " + vertex_loc(upd, v), dist[v], est, upd);
            continue;
        }
        if (est < dist[v]) {
            rep.fail("estimate-lower-bound", tag + " " + vertex_loc(upd, v), dist[v], est, upd);
        }
        if (est > (1.0 + eps) * dist[v]) {
            rep.fail("estimate-upper-bound", tag + " " + vertex_loc(upd, v),
                     (1.0 + eps) * dist[v], est, upd);
        }
    }
}

}  // namespace

OracleReport verify_sssp_replay(const Instance& inst, const VerifyOptions& opt) {
    OracleReport rep;
    const VertexId source = 0;
    double w_max = inst.max_weight();
    double xi = xi_for_epsilon(opt.eps, inst.final_edge_count());

    auto base = std::make_shared<DynGraph>(inst.build_initial_graph());
    DynGraph replica = inst.build_initial_graph();
    SourceSSSP s(base, source, xi, w_max);

    std::size_t upd = 0;
    auto full_check = [&]() {
        auto dist = exact_sssp(replica, source);
        check_sandwich(s, dist, opt.eps, upd, "sssp", rep);
        check_structure_state(s, upd, "sssp", rep);
    };
    full_check();
    for (const InstanceItem& item : inst.items) {
        const Update* u = std::get_if<Update>(&item);
        if (!u) continue;
        if (u->tail != source) {
            throw std::invalid_argument("run-sssp requires source-incident updates (source 0)");
        }
        replica.apply(*u);
        s.source_insert(u->head, u->weight);
        ++upd;
        if (upd % opt.check_every == 0) full_check();
    }
    full_check();
    return rep;
}

namespace {

void check_apsp_state(const IncAPSP& x, const DynGraph& replica, double eps, std::size_t upd,
                      OracleReport& rep, bool deep) {
    const std::size_t n = x.order();
    ++rep.checks_run;
    std::vector<std::vector<double>> dist;
    dist.reserve(n);
    for (VertexId s = 0; s < n; ++s) dist.push_back(exact_sssp(replica, s));

    for (VertexId s = 0; s < n; ++s) {
        for (VertexId t = 0; t < n; ++t) {
            double est = x.query(s, t);
            if (!std::isfinite(dist[s][t])) {
                if (std::isfinite(est)) {
                    rep.fail("apsp-reachability", pair_loc(upd, s, t), kInf, est, upd);
                }
                continue;
            }
            if (!std::isfinite(est)) {
                rep.fail("apsp-reachability", pair_loc(upd, s, t), dist[s][t], est, upd);
                continue;
            }
            if (est < dist[s][t]) {
                rep.fail("apsp-lower-bound", pair_loc(upd, s, t), dist[s][t], est, upd);
            }
            if (est > (1.0 + eps) * dist[s][t]) {
                rep.fail("apsp-upper-bound", pair_loc(upd, s, t), (1.0 + eps) * dist[s][t], est,
                         upd);
            }
        }
    }
    if (!deep) return;

    // Shortcut soundness: stored shortcut weights never undercut true
    // distances (each is the recorded length of a real walk).
    for (VertexId s = 0; s < n; ++s) {
        const SourceSSSP& f = x.forward_structure(s);
        const SourceSSSP& r = x.reverse_structure(s);
        for (VertexId t = 0; t < n; ++t) {
            double wf = f.shortcut_weight(t);
            if (std::isfinite(wf) && wf < dist[s][t]) {
                rep.fail("shortcut-soundness-fwd", pair_loc(upd, s, t), dist[s][t], wf, upd);
            }
            double wr = r.shortcut_weight(t);
            if (std::isfinite(wr) && wr < dist[t][s]) {
                rep.fail("shortcut-soundness-rev", pair_loc(upd, t, s), dist[t][s], wr, upd);
            }
        }
    }

    // Shortcut invariants (1)-(3) at quiescence.
    auto endpoints = x.current_endpoints();
    for (VertexId s : endpoints) {
        for (VertexId t : endpoints) {
            if (s == t) continue;
            double emitted = x.dense_emitted(s, t);
            if (x.forward_structure(s).shortcut_weight(t) > emitted) {
                rep.fail("shortcut-invariant-1-fwd", pair_loc(upd, s, t), emitted,
                         x.forward_structure(s).shortcut_weight(t), upd);
            }
            if (x.reverse_structure(t).shortcut_weight(s) > emitted) {
                rep.fail("shortcut-invariant-1-rev", pair_loc(upd, s, t), emitted,
                         x.reverse_structure(t).shortcut_weight(s), upd);
            }
        }
    }
    for (VertexId t : endpoints) {
        const SourceSSSP& rt = x.reverse_structure(t);
        for (VertexId s = 0; s < n; ++s) {
            double bound = rt.estimate(s);
            if (x.forward_structure(s).shortcut_weight(t) > bound) {
                rep.fail("shortcut-invariant-2", pair_loc(upd, s, t), bound,
                         x.forward_structure(s).shortcut_weight(t), upd);
            }
        }
    }
    for (VertexId s : endpoints) {
        const SourceSSSP& fs = x.forward_structure(s);
        for (VertexId t = 0; t < n; ++t) {
            double bound = fs.estimate(t);
            if (x.reverse_structure(t).shortcut_weight(s) > bound) {
                rep.fail("shortcut-invariant-3", pair_loc(upd, s, t), bound,
                         x.reverse_structure(t).shortcut_weight(s), upd);
            }
        }
    }

    // Estimate-error cascade at the designed exponents. dist_G here is the true
    // (unfiltered) distance; one (1+eps/4) factor covers update filtering.
    const auto& par = x.params();
    double rho_k = static_cast<double>(x.rank_offset());
    double filter_slack = 1.0 + par.eps_internal;
    double f3 = std::pow(1.0 + par.xi, rho_k + par.y_prime) * filter_slack;
    for (VertexId s : endpoints) {
        for (VertexId t : endpoints) {
            double emitted = x.dense_emitted(s, t);
            if (std::isfinite(emitted) && std::isfinite(dist[s][t]) &&
                emitted > f3 * dist[s][t]) {
                rep.fail("cascade-item-iii", pair_loc(upd, s, t), f3 * dist[s][t], emitted, upd);
            }
        }
    }
    double f67 = std::pow(1.0 + par.xi, rho_k + 3.0 * par.y_prime) * filter_slack;
    for (VertexId s = 0; s < n; ++s) {
        for (VertexId t = 0; t < n; ++t) {
            if (!std::isfinite(dist[s][t])) continue;
            double fwd = x.forward_structure(s).estimate(t);
            if (std::isfinite(fwd) && fwd > f67 * dist[s][t]) {
                rep.fail("cascade-item-vi", pair_loc(upd, s, t), f67 * dist[s][t], fwd, upd);
            }
            double rev = x.reverse_structure(t).estimate(s);
            if (std::isfinite(rev) && rev > f67 * dist[s][t]) {
                rep.fail("cascade-item-vii", pair_loc(upd, s, t), f67 * dist[s][t], rev, upd);
            }
        }
    }
}

}  // namespace

OracleReport verify_apsp_replay(const Instance& inst, const VerifyOptions& opt) {
    OracleReport rep;
    DynGraph replica = inst.build_initial_graph();
    IncAPSP x(replica, opt.eps, opt.variant, opt.seed, inst.max_weight(),
              inst.final_edge_count());

    std::size_t upd = 0;
    check_apsp_state(x, replica, opt.eps, upd, rep, true);
    for (const InstanceItem& item : inst.items) {
        const Update* u = std::get_if<Update>(&item);
        if (!u) continue;
        replica.apply(*u);
        x.update(*u);
        ++upd;
        if (upd % opt.check_every == 0) {
            check_apsp_state(x, replica, opt.eps, upd, rep, opt.check_certificates);
        }
    }
    check_apsp_state(x, replica, opt.eps, upd, rep, true);
    return rep;
}

OracleReport verify_offline(const Instance& inst, const VerifyOptions& opt) {
    OracleReport rep;
    const VertexId source = 0;
    DynGraph g0 = inst.build_initial_graph();
    UpdateSequence seq = inst.updates_only();
    OfflineSSSP off(g0, seq, source, opt.eps, inst.max_weight());

    // Replay for version reconstruction on the oracle side.
    DynGraph replica = inst.build_initial_graph();
    for (const Update& u : seq.updates) replica.apply(u);

    auto check_query = [&](VertexId v, std::uint32_t t, std::size_t where) {
        ++rep.checks_run;
        auto dist = exact_sssp_at(replica, source, t);
        double ans = off.query(v, t);
        if (!std::isfinite(dist[v])) {
            if (std::isfinite(ans)) {
                rep.fail("offline-reachability", vertex_loc(where, v), kInf, ans, where);
            }
            return;
        }
        if (!std::isfinite(ans)) {
            rep.fail("offline-reachability", vertex_loc(where, v), dist[v], ans, where);
            return;
        }
        if (ans < dist[v]) {
            rep.fail("offline-lower-bound", vertex_loc(where, v), dist[v], ans, where);
        }
        if (ans > (1.0 + opt.eps) * dist[v]) {
            rep.fail("offline-upper-bound", vertex_loc(where, v), (1.0 + opt.eps) * dist[v], ans,
                     where);
        }
    };

    std::size_t where = 0;
    for (const InstanceItem& item : inst.items) {
        if (const QueryOffline* q = std::get_if<QueryOffline>(&item)) {
            check_query(q->v, std::min<std::uint32_t>(q->t, off.delta()), where);
        }
        ++where;
    }
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<VertexId> pick_v(0, static_cast<VertexId>(inst.n - 1));
    std::uniform_int_distribution<std::uint32_t> pick_t(0, off.delta());
    for (std::size_t i = 0; i < opt.offline_extra_queries; ++i) {
        check_query(pick_v(rng), pick_t(rng), where + i);
    }

    // Costly-call and per-vertex collection-size bounds.
    double nw = static_cast<double>(inst.n) * inst.max_weight();
    double ell_term = 1.0 + std::log(std::max(2.0, nw)) / std::log1p(off.xi());
    double call_bound = ell_term * std::max(1.0, std::log2(std::max<std::uint32_t>(2, off.delta())));
    ++rep.checks_run;
    for (VertexId v = 0; v < inst.n; ++v) {
        if (off.costly_calls(v) > call_bound) {
            rep.fail("offline-costly-calls", "vertex " + std::to_string(v), call_bound,
                     static_cast<double>(off.costly_calls(v)), 0);
        }
        if (static_cast<double>(off.collection().size(v)) > call_bound + 2.0) {
            rep.fail("offline-collection-size", "vertex " + std::to_string(v), call_bound + 2.0,
                     static_cast<double>(off.collection().size(v)), 0);
        }
    }
    double depth_bound = std::ceil(std::log2(static_cast<double>(off.delta()) + 1.0));
    if (off.delta() > 0 && off.max_recursion_depth() > depth_bound) {
        rep.fail("offline-recursion-depth", "build", depth_bound,
                 static_cast<double>(off.max_recursion_depth()), 0);
    }
    return rep;
}

AdversaryStrategy worst_ratio_strategy() {
    return [](const IncAPSP& x, const std::vector<std::vector<double>>& dist,
              std::mt19937_64& rng) {
        const std::size_t n = x.order();
        std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(n - 1));
        double worst_ratio = 0.0;
        VertexId bu = pick(rng), bv = pick(rng);
        for (VertexId u = 0; u < n; ++u) {
            for (VertexId v = 0; v < n; ++v) {
                if (u == v || !std::isfinite(dist[u][v]) || dist[u][v] <= 0.0) continue;
                double ratio = x.query(u, v) / dist[u][v];
                if (ratio > worst_ratio) {
                    worst_ratio = ratio;
                    bu = u;
                    bv = v;
                }
            }
        }
        double w;
        if (std::isfinite(dist[bu][bv]) && dist[bu][bv] >= 2.0) {
            w = std::min(x.weight_bound(), std::floor(dist[bu][bv] / 2.0));
        } else {
            w = 1.0;
        }
        return Update{UpdateKind::insert, bu, bv, w};
    };
}

OracleReport adaptive_adversary(IncAPSP& x, DynGraph& g, std::size_t rounds, double eps,
                                std::mt19937_64& rng, AdversaryStrategy strategy) {
    OracleReport rep;
    const std::size_t n = x.order();
    if (!strategy) strategy = worst_ratio_strategy();

    for (std::size_t round = 0; round < rounds; ++round) {
        // Read all current answers, then let the strategy choose.
        std::vector<std::vector<double>> dist;
        dist.reserve(n);
        for (VertexId s = 0; s < n; ++s) dist.push_back(exact_sssp(g, s));

        Update u = strategy(x, dist, rng);
        g.apply(u);
        x.update(u);

        ++rep.checks_run;
        for (VertexId s = 0; s < n; ++s) {
            auto ds = exact_sssp(g, s);
            for (VertexId t = 0; t < n; ++t) {
                double est = x.query(s, t);
                if (std::isfinite(ds[t]) != std::isfinite(est)) {
                    rep.fail("adversary-reachability", pair_loc(round, s, t), ds[t], est, round);
                } else if (std::isfinite(ds[t])) {
                    if (est < ds[t]) {
                        rep.fail("adversary-lower-bound", pair_loc(round, s, t), ds[t], est,
                                 round);
                    }
                    if (est > (1.0 + eps) * ds[t]) {
                        rep.fail("adversary-upper-bound", pair_loc(round, s, t),
                                 (1.0 + eps) * ds[t], est, round);
                    }
                }
            }
        }
    }
    return rep;
}

}  // namespace incsp
