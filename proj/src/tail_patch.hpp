#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "transit/plan.hpp"

namespace transit {

inline constexpr std::size_t kNoPos = std::numeric_limits<std::size_t>::max();

// A candidate remaining-plan: the committed stops plus up to two injected
// stops and up to two attach marks for the candidate passenger. Evaluating
// through this view avoids materializing a stop vector per candidate; the
// winning patch is materialized once on commit.
struct TailPatch {
    const std::vector<RouteStop>* base = nullptr;
    const RouteStop* ins0 = nullptr;
    const RouteStop* ins1 = nullptr;
    std::size_t ins0_pos = kNoPos;  // positions in the final sequence
    std::size_t ins1_pos = kNoPos;  // ins0_pos < ins1_pos when both set
    std::size_t attach_pick = kNoPos;  // base index gaining the cand pickup
    std::size_t attach_drop = kNoPos;  // base index gaining the cand dropoff
    std::int64_t cand = -1;

    std::size_t size() const {
        return base->size() + (ins0 ? 1 : 0) + (ins1 ? 1 : 0);
    }

    std::size_t base_index(std::size_t i) const {
        if (i == ins0_pos || i == ins1_pos) return kNoPos;
        std::size_t shift = 0;
        if (ins0 && i > ins0_pos) ++shift;
        if (ins1 && i > ins1_pos) ++shift;
        return i - shift;
    }

    const RouteStop& at(std::size_t i) const {
        if (i == ins0_pos) return *ins0;
        if (i == ins1_pos) return *ins1;
        return (*base)[base_index(i)];
    }

    // Injected stops carry the candidate in their own pickup/dropoff lists;
    // these marks cover only attachments to existing stops.
    bool cand_picks_at(std::size_t i) const {
        return attach_pick != kNoPos && base_index(i) == attach_pick;
    }

    bool cand_drops_at(std::size_t i) const {
        return attach_drop != kNoPos && base_index(i) == attach_drop;
    }

    std::vector<RouteStop> materialize() const {
        std::vector<RouteStop> out;
        out.reserve(size());
        for (std::size_t i = 0; i < size(); ++i) {
            out.push_back(at(i));
            if (attach_pick != kNoPos && base_index(i) == attach_pick)
                out.back().pickups.push_back(cand);
            if (attach_drop != kNoPos && base_index(i) == attach_drop)
                out.back().dropoffs.push_back(cand);
        }
        return out;
    }
};

}  // namespace transit
