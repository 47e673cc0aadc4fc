#include "incsp/source_sssp.hpp"

#include <algorithm>
#include <cassert>

namespace incsp {

SourceSSSP::SourceSSSP(std::shared_ptr<DynGraph> base, VertexId source, double xi, double w_max,
                       Direction dir)
    : base_(std::move(base)),
      source_(source),
      xi_(xi),
      w_max_(w_max),
      dir_(dir) {
    if (!(xi_ >= std::ldexp(1.0, -20) && xi_ < 1.0)) {
        throw std::invalid_argument("xi must lie in [2^-20, 1)");
    }
    const std::size_t n = base_->order();
    if (source_ >= n) throw std::invalid_argument("source out of range");
    double nw = std::max(1.0, static_cast<double>(n) * w_max_);
    ell_ = std::max<std::uint32_t>(
        1, static_cast<std::uint32_t>(std::ceil(std::log(nw) / std::log1p(xi_))));

    est_ = EstimateVector(n);
    shortcut_.assign(n, kInf);
    shortcut_triggers_.assign(n, 0);
    degree_.assign(n, 0);
    for (const EdgeRecord& e : base_->edges()) {
        ++degree_[e.tail];
        ++degree_[e.head];
    }
    rank_.assign(n, kNoRank);
    class_pos_.assign(n, 0);
    rank_increases_.assign(n, 0);
    bucket_of_.assign(n, kNoBucket);
    bucket_pos_.assign(n, 0);
    change_mark_.assign(n, 0);

    // Exact initialization: PD with the guard collapsed to plain relaxation
    // is Dijkstra from scratch (all other estimates are at the sentinel).
    est_.d[source_] = 0.0;
    bucket_insert(source_);
    VertexId start[1] = {source_};
    propagate_dijkstra(composed_view(), est_, start, 0.0, stats_, scratch_,
                       [this](VertexId v, double old) { after_estimate_write(v, old); });
    // Landings during init are not "drops"; zero any counted by the kernel.
    std::fill(est_.drops.begin(), est_.drops.end(), 0);
    counters_.landings = 0;
    reset_ranks_to_zero();
}

void SourceSSSP::begin_change_collection() {
    ++change_epoch_;
    changed_.clear();
}

void SourceSSSP::mark_changed(VertexId v) {
    if (change_mark_[v] != change_epoch_) {
        change_mark_[v] = change_epoch_;
        changed_.push_back(v);
    }
}

std::int32_t SourceSSSP::bucket_index(double d) const {
    if (d == 0.0) return -1;
    return static_cast<std::int32_t>(std::floor(std::log(d) / std::log1p(xi_)));
}

void SourceSSSP::bucket_insert(VertexId v) {
    std::int32_t b = bucket_index(est_.d[v]);
    Bucket& bk = buckets_[b];
    bucket_of_[v] = b;
    bucket_pos_[v] = static_cast<std::uint32_t>(bk.members.size());
    bk.members.push_back(v);
    bk.degree += degree_[v];
}

void SourceSSSP::bucket_erase(VertexId v) {
    std::int32_t b = bucket_of_[v];
    if (b == kNoBucket) return;
    Bucket& bk = buckets_[b];
    VertexId last = bk.members.back();
    bk.members[bucket_pos_[v]] = last;
    bucket_pos_[last] = bucket_pos_[v];
    bk.members.pop_back();
    bk.degree -= degree_[v];
    bucket_of_[v] = kNoBucket;
    if (bk.members.empty()) buckets_.erase(b);
}

void SourceSSSP::after_estimate_write(VertexId v, double old_value) {
    assert(est_.d[v] < old_value);
    if (std::isfinite(old_value)) {
        bucket_erase(v);
    } else {
        ++counters_.landings;
    }
    bucket_insert(v);
    mark_changed(v);
}

void SourceSSSP::bump_degree(VertexId v, std::int64_t delta) {
    degree_[v] += delta;
    if (rank_[v] != kNoRank) class_degree_[rank_[v]] += delta;
    if (bucket_of_[v] != kNoBucket) buckets_[bucket_of_[v]].degree += delta;
}

void SourceSSSP::enroll(VertexId v, std::uint32_t k) {
    assert(rank_[v] == kNoRank);
    if (class_members_.size() <= k) {
        class_members_.resize(k + 1);
        class_degree_.resize(k + 1, 0);
    }
    rank_[v] = k;
    class_pos_[v] = static_cast<std::uint32_t>(class_members_[k].size());
    class_members_[k].push_back(v);
    class_degree_[k] += degree_[v];
}

void SourceSSSP::set_rank(VertexId v, std::uint32_t k) {
    std::uint32_t old = rank_[v];
    if (old == k) return;
    auto& members = class_members_[old];
    VertexId last = members.back();
    members[class_pos_[v]] = last;
    class_pos_[last] = class_pos_[v];
    members.pop_back();
    class_degree_[old] -= degree_[v];
    rank_[v] = kNoRank;
    enroll(v, k);
    if (k > old) {
        ++rank_increases_[v];
        ++counters_.rank_increase_total;
    }
}

void SourceSSSP::assign_rank_or_enroll(VertexId v, std::uint32_t k) {
    if (rank_[v] == kNoRank) {
        enroll(v, k);
    } else {
        set_rank(v, k);
    }
}

void SourceSSSP::reset_ranks_to_zero() {
    class_members_.assign(1, {});
    class_degree_.assign(1, 0);
    const std::size_t n = est_.size();
    for (VertexId v = 0; v < n; ++v) {
        rank_[v] = kNoRank;
        if (reachable(v)) enroll(v, 0);
    }
    max_rank_ = 0;
}

bool SourceSSSP::set_shortcut_weight(VertexId v, double w) {
    if (!(w < shortcut_[v])) return false;
    if (!std::isfinite(shortcut_[v])) {
        ++shortcut_count_;
        bump_degree(source_, 1);
        bump_degree(v, 1);
    }
    shortcut_[v] = w;
    ++counters_.shortcut_weight_drops;
    return true;
}

std::vector<VertexId> SourceSSSP::run_pd(std::span<const VertexId> input) {
    auto touched =
        propagate_dijkstra(composed_view(), est_, input, xi_, stats_, scratch_,
                           [this](VertexId v, double old) { after_estimate_write(v, old); });
    for (VertexId v : touched) stats_.touched_degree_sum += degree_[v];
    if (after_propagate) after_propagate(*this, touched);
    return touched;
}

std::vector<VertexId> SourceSSSP::guarded_relax(VertexId head, double cand) {
    if (!(est_.d[head] > (1.0 + xi_) * cand)) return {};
    double old = est_.d[head];
    if (std::isfinite(old)) ++est_.drops[head];
    est_.d[head] = cand;
    after_estimate_write(head, old);
    VertexId start[1] = {head};
    return run_pd(start);
}

bool SourceSSSP::source_insert(VertexId v, double w) {
    // Shortcut weights are walk lengths, so the domain is {0} u [1, nW].
    if (!weight_in_domain(w, static_cast<double>(est_.size()) * w_max_)) {
        throw std::invalid_argument("source insert weight outside {0} u [1, nW]");
    }
    begin_change_collection();
    set_shortcut_weight(v, w);
    auto touched = guarded_relax(v, /*d(s)=0*/ w);
    if (touched.empty()) return false;
    ++counters_.triggered_inserts;
    ++shortcut_triggers_[v];
    std::uint32_t new_rank = max_rank_ + 1;
    for (VertexId x : touched) assign_rank_or_enroll(x, new_rank);
    max_rank_ = new_rank;
    synchronize();
    return true;
}

void SourceSSSP::synchronize() {
    for (;;) {
        std::vector<std::int64_t> suffix(max_rank_ + 2, 0);
        for (std::int32_t k = max_rank_; k >= 0; --k) {
            suffix[k] = suffix[k + 1] + class_degree(k);
        }
        std::uint32_t k = 0;
        bool found = false;
        for (; k <= max_rank_; ++k) {
            if (class_degree(k) <= suffix[k + 1]) {
                found = true;
                break;
            }
        }
        if (!found) break;
        if (max_rank_ == 0) break;  // empty graph; nothing to rebalance
        std::vector<VertexId> input;
        for (std::uint32_t j = k; j <= max_rank_; ++j) {
            input.insert(input.end(), class_members_[j].begin(), class_members_[j].end());
        }
        counters_.sync_input_total += input.size();
        auto touched = run_pd(input);
        for (VertexId x : touched) assign_rank_or_enroll(x, k);
        max_rank_ = k;
    }
    if (after_synchronize) after_synchronize(*this);
}

bool SourceSSSP::sync_quiescent() const {
    std::int64_t suffix = 0;
    for (std::int32_t k = max_rank_; k >= 0; --k) {
        if (class_degree(k) <= suffix) return false;
        suffix += class_degree(k);
    }
    return true;
}

void SourceSSSP::note_base_edge(VertexId tail, VertexId head) {
    bump_degree(tail, 1);
    bump_degree(head, 1);
}

void SourceSSSP::relax_inserted_edge(VertexId tail, VertexId head, double w) {
    begin_change_collection();
    if (dir_ == Direction::reverse) std::swap(tail, head);
    guarded_relax(head, est_.d[tail] + w);
}

void SourceSSSP::finish_batch(std::uint32_t alpha) {
    rho_ = alpha;
    reset_ranks_to_zero();
}

void SourceSSSP::batch_insert(std::span<const WeightedEdge> edges, std::uint32_t alpha) {
    for (const WeightedEdge& e : edges) {
        base_->apply(Update{UpdateKind::insert, e.tail, e.head, e.weight});
        note_base_edge(e.tail, e.head);
    }
    for (const WeightedEdge& e : edges) relax_inserted_edge(e.tail, e.head, e.weight);
    finish_batch(alpha);
}

void SourceSSSP::det_reset() {
    std::vector<VertexId> everyone;
    everyone.reserve(est_.size());
    for (VertexId v = 0; v < est_.size(); ++v) {
        if (reachable(v)) everyone.push_back(v);
    }
    run_pd(everyone);
    rho_ = 0;
    reset_ranks_to_zero();
}

void SourceSSSP::rand_reset(std::uint32_t lambda, std::mt19937_64& rng) {
    if (lambda < 1 || lambda > ell_) {
        throw std::invalid_argument("rand_reset lambda outside [1, ell]");
    }
    const double ell = static_cast<double>(ell_);
    const double m = static_cast<double>(composed_edge_count());
    const double degree_cap = 400.0 * m * ell / (static_cast<double>(lambda) * lambda);
    const std::uint32_t j_max = lambda / 8;

    // The estimates do not move while Z is assembled, so the <= j_max+1
    // distinct intervals are profiled once and sampling is O(1) per draw.
    struct Interval {
        double lo = 0.0, hi = 0.0;
        bool accepted = false;
    };
    std::vector<Interval> intervals(j_max + 1);
    for (std::uint32_t j = 0; j <= j_max; ++j) {
        double lo_exp = static_cast<double>(j) * 8.0 * ell / lambda;
        double hi_exp = static_cast<double>(j + 2) * 8.0 * ell / lambda;
        Interval& iv = intervals[j];
        iv.lo = std::pow(1.0 + xi_, lo_exp);
        iv.hi = std::pow(1.0 + xi_, hi_exp);
        std::int64_t deg = 0;
        auto it = buckets_.lower_bound(static_cast<std::int32_t>(std::floor(lo_exp)));
        for (; it != buckets_.end() && it->first <= static_cast<std::int32_t>(std::floor(hi_exp));
             ++it) {
            if (it->first >= lo_exp && it->first + 1 <= hi_exp) {
                deg += it->second.degree;  // bucket fully inside
            } else {
                for (VertexId v : it->second.members) {
                    if (est_.d[v] >= iv.lo && est_.d[v] <= iv.hi) deg += degree_[v];
                }
            }
        }
        iv.accepted = deg <= degree_cap;
    }

    const std::uint64_t rounds = static_cast<std::uint64_t>(std::ceil(
        randomized_reset_constant * (25.0 * ell / lambda) * std::log2(std::max<std::size_t>(2, est_.size()))));
    std::uniform_int_distribution<std::uint32_t> sample(0, j_max);
    std::vector<char> picked(j_max + 1, 0);
    for (std::uint64_t i = 0; i < rounds; ++i) {
        std::uint32_t j = sample(rng);
        if (intervals[j].accepted) picked[j] = 1;
    }

    std::vector<VertexId> z;
    std::vector<char> in_z(est_.size(), 0);
    for (std::uint32_t j = 0; j <= j_max; ++j) {
        if (!picked[j]) continue;
        double lo_exp = static_cast<double>(j) * 8.0 * ell / lambda;
        double hi_exp = static_cast<double>(j + 2) * 8.0 * ell / lambda;
        auto it = buckets_.lower_bound(static_cast<std::int32_t>(std::floor(lo_exp)));
        for (; it != buckets_.end() && it->first <= static_cast<std::int32_t>(std::floor(hi_exp));
             ++it) {
            for (VertexId v : it->second.members) {
                if (est_.d[v] >= intervals[j].lo && est_.d[v] <= intervals[j].hi && !in_z[v]) {
                    in_z[v] = 1;
                    z.push_back(v);
                }
            }
        }
    }
    run_pd(z);
    rho_ = lambda;
    reset_ranks_to_zero();
}

}  // namespace incsp
