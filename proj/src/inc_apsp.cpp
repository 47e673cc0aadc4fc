#include "incsp/inc_apsp.hpp"

#include <algorithm>
#include <cmath>

namespace incsp {

double xi_for_epsilon(double eps, std::size_t m_final) {
    double m = std::max<double>(2.0, static_cast<double>(m_final));
    return std::max(std::ldexp(1.0, -20), eps / (2.0 * std::log2(m) + 2.0));
}

IncAPSP::IncAPSP(const DynGraph& g0, double eps, ApspVariant variant, std::uint64_t seed,
                 double w_max, std::optional<std::size_t> m_hint)
    : n_(g0.order()),
      eps_(eps),
      w_max_(w_max),
      variant_(variant),
      rng_(seed),
      m_hint_(m_hint),
      filter_(eps / 4.0) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0,1)");

    const double m = static_cast<double>(
        std::max<std::size_t>(2, m_hint_.value_or(std::max<std::size_t>(1, g0.edge_count()))));
    const double n = static_cast<double>(std::max<std::size_t>(2, n_));
    params_.m_for_params = static_cast<std::size_t>(m);
    params_.b = static_cast<std::uint32_t>(std::ceil(std::sqrt(n)));
    if (variant_ == ApspVariant::deterministic) {
        params_.p = std::max<std::uint32_t>(
            1, static_cast<std::uint32_t>(std::ceil(
                   std::sqrt(m) * std::sqrt(eps_) / (std::pow(n, 0.25) * std::log2(n)))));
        params_.rho_star = 0;
    } else {
        params_.p = std::max<std::uint32_t>(
            1, static_cast<std::uint32_t>(
                   std::ceil(std::cbrt(m) / (std::pow(n, 1.0 / 6.0) * std::cbrt(eps_)))));
        params_.rho_star = static_cast<std::uint32_t>(std::ceil(params_.p * std::log2(m)));
    }
    params_.eps_internal = eps_ / 4.0;
    params_.y_prime = std::log2(m) + 2.0;
    params_.alpha_step = static_cast<std::uint32_t>(std::ceil(4.0 * params_.y_prime));
    params_.xi = std::max(std::ldexp(1.0, -20),
                          params_.eps_internal / (10.0 * params_.p * (std::log2(m) + 2.0)));

    base_ = std::make_shared<DynGraph>(g0.order());
    for (const EdgeRecord& e : g0.edges()) {
        base_->add_initial_edge(e.tail, e.head, e.current_weight());
    }
    filter_.seed(*base_);

    rho_ = params_.rho_star;
    fwd_.reserve(n_);
    rev_.reserve(n_);
    for (VertexId s = 0; s < n_; ++s) {
        fwd_.push_back(
            std::make_unique<SourceSSSP>(base_, s, params_.xi, w_max_, Direction::forward));
        rev_.push_back(
            std::make_unique<SourceSSSP>(base_, s, params_.xi, w_max_, Direction::reverse));
    }

    slot_of_.assign(n_, -1);
    dense_ = std::make_unique<DenseAPSP>(2 * params_.b, params_.xi);
    last_fed_.assign(static_cast<std::size_t>(2 * params_.b) * (2 * params_.b), kInf);
}

double IncAPSP::query(VertexId u, VertexId v) const { return fwd_[u]->estimate(v); }

double IncAPSP::dense_estimate(VertexId u, VertexId v) const {
    if (slot_of_[u] < 0 || slot_of_[v] < 0) return kInf;
    return dense_->estimate(slot_of_[u], slot_of_[v]);
}

double IncAPSP::dense_emitted(VertexId u, VertexId v) const {
    if (slot_of_[u] < 0 || slot_of_[v] < 0) return kInf;
    return dense_->last_emitted(slot_of_[u], slot_of_[v]);
}

IncAPSP::WorkTotals IncAPSP::work_totals() const {
    WorkTotals t;
    auto add = [&](const SourceSSSP& s) {
        t.pops += s.stats().pops;
        t.pushes += s.stats().pushes;
        t.edge_scans += s.stats().edge_scans;
        t.rank_increases += s.counters().rank_increase_total;
        t.shortcut_decreases += s.counters().shortcut_weight_drops;
    };
    for (const auto& s : fwd_) add(*s);
    for (const auto& s : rev_) add(*s);
    return t;
}

void IncAPSP::ensure_in_v_cur(VertexId v) {
    if (slot_of_[v] >= 0) return;
    slot_of_[v] = static_cast<std::int32_t>(v_cur_.size());
    v_cur_.push_back(v);

    // A vertex joining V_cur activates invariant obligations against every
    // other vertex: seed the dense component with the current estimates
    // between v and V_cur, and the shortcut slots for v in all structures.
    for (VertexId other : v_cur_) {
        if (other == v) continue;
        enqueue_dense(v, other, fwd_[v]->estimate(other));
        enqueue_dense(other, v, fwd_[other]->estimate(v));
    }
    for (VertexId s = 0; s < n_; ++s) {
        double to_v = rev_[v]->estimate(s);  // estimate of dist(s, v)
        if (std::isfinite(to_v)) queue_.push_back({Event::Kind::shortcut_fwd, s, v, to_v});
        double from_v = fwd_[v]->estimate(s);  // estimate of dist(v, s)
        if (std::isfinite(from_v)) queue_.push_back({Event::Kind::shortcut_rev, s, v, from_v});
    }
}

void IncAPSP::enqueue_dense(VertexId u, VertexId v, double w) {
    if (!std::isfinite(w)) return;
    std::size_t key = fed_index(slot_of_[u], slot_of_[v]);
    if (!(w * (1.0 + params_.xi) < last_fed_[key])) return;
    last_fed_[key] = w;
    queue_.push_back({Event::Kind::dense_in, u, v, w});
}

void IncAPSP::collect_structure_changes(Direction dir, VertexId owner) {
    // Estimate changes only generate events while the owner is a phase
    // endpoint; for other owners the shortcut invariants pose no obligation.
    if (slot_of_[owner] < 0) return;
    if (dir == Direction::forward) {
        // D_owner(t) fell: feeds the dense pair (owner, t) when both are phase
        // endpoints, and the reversed shortcut toward owner in DR_t.
        const SourceSSSP& s = *fwd_[owner];
        for (VertexId t : s.last_changed()) {
            double val = s.estimate(t);
            if (slot_of_[t] >= 0) enqueue_dense(owner, t, val);
            queue_.push_back({Event::Kind::shortcut_rev, t, owner, val});
        }
    } else {
        // DR_owner(u) fell: feeds the shortcut e_{u,owner} in D_u.
        const SourceSSSP& s = *rev_[owner];
        for (VertexId u : s.last_changed()) {
            queue_.push_back({Event::Kind::shortcut_fwd, u, owner, s.estimate(u)});
        }
    }
}

void IncAPSP::drain_events() {
    while (!queue_.empty()) {
        Event ev = queue_.front();
        queue_.pop_front();
        switch (ev.kind) {
            case Event::Kind::dense_in: {
                auto emissions = dense_->update(static_cast<std::uint32_t>(slot_of_[ev.a]),
                                                static_cast<std::uint32_t>(slot_of_[ev.b]),
                                                ev.value);
                for (const auto& em : emissions) {
                    VertexId x = v_cur_[em.from];
                    VertexId y = v_cur_[em.to];
                    if (x == y) continue;
                    queue_.push_back({Event::Kind::shortcut_fwd, x, y, em.value});
                    queue_.push_back({Event::Kind::shortcut_rev, y, x, em.value});
                }
                break;
            }
            case Event::Kind::shortcut_fwd: {
                // Weight-decrease candidate for shortcut a -> b in D_a.
                if (fwd_[ev.a]->source_insert(ev.b, ev.value)) {
                    collect_structure_changes(Direction::forward, ev.a);
                }
                break;
            }
            case Event::Kind::shortcut_rev: {
                // Candidate for the reversed shortcut toward b in DR_a.
                if (rev_[ev.a]->source_insert(ev.b, ev.value)) {
                    collect_structure_changes(Direction::reverse, ev.a);
                }
                break;
            }
        }
    }
}

void IncAPSP::update(const Update& u) {
    if (!weight_in_domain(u.weight, w_max_)) {
        throw std::invalid_argument("update weight outside {0} u [1, W]");
    }
    if (!filter_.admit(u)) {
        ++updates_filtered_;
        return;
    }
    ++updates_applied_;
    double recorded = filter_.recorded(u.tail, u.head);
    e_cur_.push_back({u.tail, u.head, recorded});
    ensure_in_v_cur(u.tail);
    ensure_in_v_cur(u.head);
    enqueue_dense(u.tail, u.head, recorded);
    drain_events();
    if (e_cur_.size() >= params_.b) {
        close_phase();
        if (k_ >= params_.p) reset_all();
    }
}

void IncAPSP::close_phase() {
    std::uint32_t alpha = params_.rho_star + (k_ + 1) * params_.alpha_step;
    if (before_batch) before_batch(e_cur_, alpha);

    // Clear phase state before batching: with V_cur empty the batch PDs
    // cannot generate events, matching the per-phase scope of the shortcut
    // invariants.
    std::vector<WeightedEdge> batch = std::move(e_cur_);
    e_cur_.clear();
    for (VertexId v : v_cur_) slot_of_[v] = -1;
    v_cur_.clear();
    dense_ = std::make_unique<DenseAPSP>(2 * params_.b, params_.xi);
    std::fill(last_fed_.begin(), last_fed_.end(), kInf);

    ++k_;
    for (const WeightedEdge& e : batch) {
        base_->apply(Update{UpdateKind::insert, e.tail, e.head, e.weight});
        for (VertexId s = 0; s < n_; ++s) {
            fwd_[s]->note_base_edge(e.tail, e.head);
            rev_[s]->note_base_edge(e.tail, e.head);
        }
    }
    for (VertexId s = 0; s < n_; ++s) {
        for (const WeightedEdge& e : batch) fwd_[s]->relax_inserted_edge(e.tail, e.head, e.weight);
        fwd_[s]->finish_batch(alpha);
        for (const WeightedEdge& e : batch) rev_[s]->relax_inserted_edge(e.tail, e.head, e.weight);
        rev_[s]->finish_batch(alpha);
    }
    rho_ = alpha;
}

void IncAPSP::reset_all() {
    ++resets_;
    if (!m_hint_) {
        // Parameters follow the current size when no final-size hint exists;
        // xi stays fixed to keep all quantization thresholds stable.
        const double m = static_cast<double>(std::max<std::size_t>(2, base_->edge_count()));
        if (variant_ == ApspVariant::randomized) {
            params_.rho_star = static_cast<std::uint32_t>(std::ceil(params_.p * std::log2(m)));
        }
    }
    for (VertexId s = 0; s < n_; ++s) {
        if (variant_ == ApspVariant::deterministic) {
            fwd_[s]->det_reset();
            rev_[s]->det_reset();
        } else {
            std::uint32_t lambda =
                std::min<std::uint32_t>(std::max<std::uint32_t>(1, params_.rho_star),
                                        std::min(fwd_[s]->ell(), rev_[s]->ell()));
            fwd_[s]->rand_reset(lambda, rng_);
            rev_[s]->rand_reset(lambda, rng_);
        }
        if (after_structure_reset) {
            after_structure_reset(*fwd_[s]);
            after_structure_reset(*rev_[s]);
        }
    }
    k_ = 0;
    rho_ = variant_ == ApspVariant::deterministic ? 0 : params_.rho_star;
}

}  // namespace incsp
