#pragma once

#include <cstdint>

#include "transit/geometry.hpp"

namespace transit {

enum class PaxState {
    Unassigned,
    WalkingToStop,
    WaitingAtStop,
    Onboard,
    Egressing,
    Served,
    Rejected,
};

const char* to_string(PaxState s);

// One demand request. arrival_s is relative to the start of the demand
// window; the engine offsets it by the design's warm-up so the same dataset
// can be replayed against designs with different warm-up periods.
struct Passenger {
    std::int64_t id = 0;
    double arrival_s = 0.0;
    Point origin;
    Point destination;
};

inline const char* to_string(PaxState s) {
    switch (s) {
        case PaxState::Unassigned: return "unassigned";
        case PaxState::WalkingToStop: return "walking";
        case PaxState::WaitingAtStop: return "waiting";
        case PaxState::Onboard: return "onboard";
        case PaxState::Egressing: return "egressing";
        case PaxState::Served: return "served";
        case PaxState::Rejected: return "rejected";
    }
    return "?";
}

}  // namespace transit
