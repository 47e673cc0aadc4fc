#pragma once

#include <cstdint>
#include <vector>

#include "incsp/graph.hpp"

namespace incsp {

// Incremental all-pairs estimates over a small fixed slot set, used as the
// dense component of the APSP composition. Maintenance is the folklore
// O(slots^2)-per-accepted-update relaxation, kept exact for the graph of
// accepted weights; a (1+xi) input filter bounds accepted updates per pair
// and a (1+xi) emission filter bounds outgoing changes. Estimates therefore
// stay within (1+xi)^2 of the unfiltered weight matrix, and emitted values
// within (1+xi)^3.
class DenseAPSP {
  public:
    struct Emission {
        std::uint32_t from = 0;
        std::uint32_t to = 0;
        double value = 0.0;
    };

    DenseAPSP(std::uint32_t slot_count, double xi);

    std::uint32_t slot_count() const { return slots_; }

    // Offers weight w for the pair (u, v). Applied only when it beats the
    // accepted weight by a factor (1+xi); on application every pair is
    // relaxed through the new edge and pairs whose estimate fell past the
    // emission filter are reported, refreshing their emitted value.
    std::vector<Emission> update(std::uint32_t u, std::uint32_t v, double w);

    double estimate(std::uint32_t u, std::uint32_t v) const { return est_[idx(u, v)]; }
    double last_emitted(std::uint32_t u, std::uint32_t v) const {
        return last_emitted_[idx(u, v)];
    }
    double accepted_weight(std::uint32_t u, std::uint32_t v) const {
        return accepted_[idx(u, v)];
    }
    std::uint32_t accepted_updates(std::uint32_t u, std::uint32_t v) const {
        return accepted_count_[idx(u, v)];
    }
    std::uint64_t total_accepted() const { return total_accepted_; }

  private:
    std::size_t idx(std::uint32_t u, std::uint32_t v) const {
        return static_cast<std::size_t>(u) * slots_ + v;
    }

    std::uint32_t slots_;
    double xi_;
    std::vector<double> est_;
    std::vector<double> last_emitted_;
    std::vector<double> accepted_;
    std::vector<std::uint32_t> accepted_count_;
    std::uint64_t total_accepted_ = 0;
};

}  // namespace incsp
