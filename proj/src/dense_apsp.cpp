#include "incsp/dense_apsp.hpp"

#include <cmath>
#include <stdexcept>

namespace incsp {

DenseAPSP::DenseAPSP(std::uint32_t slot_count, double xi) : slots_(slot_count), xi_(xi) {
    if (slot_count == 0) throw std::invalid_argument("slot_count must be >= 1");
    std::size_t total = static_cast<std::size_t>(slots_) * slots_;
    est_.assign(total, kInf);
    last_emitted_.assign(total, kInf);
    accepted_.assign(total, kInf);
    accepted_count_.assign(total, 0);
    for (std::uint32_t u = 0; u < slots_; ++u) {
        est_[idx(u, u)] = 0.0;
        last_emitted_[idx(u, u)] = 0.0;
    }
}

std::vector<DenseAPSP::Emission> DenseAPSP::update(std::uint32_t u, std::uint32_t v, double w) {
    if (u >= slots_ || v >= slots_) throw std::invalid_argument("slot out of range");
    if (w < 0.0) throw std::invalid_argument("negative weight");
    if (!(w * (1.0 + xi_) < accepted_[idx(u, v)])) return {};
    accepted_[idx(u, v)] = w;
    ++accepted_count_[idx(u, v)];
    ++total_accepted_;

    // One pass with the pre-update matrix is exact: entries (x,u) and (v,y)
    // are fixed points of the relaxation, so in-place reads are safe.
    std::vector<Emission> out;
    for (std::uint32_t x = 0; x < slots_; ++x) {
        double to_u = est_[idx(x, u)];
        if (!std::isfinite(to_u)) continue;
        for (std::uint32_t y = 0; y < slots_; ++y) {
            double from_v = est_[idx(v, y)];
            double cand = to_u + w + from_v;
            double& cell = est_[idx(x, y)];
            if (cand < cell) {
                cell = cand;
                double& emitted = last_emitted_[idx(x, y)];
                if (cell * (1.0 + xi_) < emitted) {
                    emitted = cell;
                    out.push_back({x, y, cell});
                }
            }
        }
    }
    return out;
}

}  // namespace incsp
