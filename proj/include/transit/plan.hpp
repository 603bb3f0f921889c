#pragma once

#include <cstdint>
#include <vector>

#include "transit/geometry.hpp"

namespace transit {

enum class StopKind { Checkpoint, FixedStop, VirtualStop, Depot };

struct RouteStop {
    Point location;
    StopKind kind = StopKind::VirtualStop;
    // Checkpoint ordinal within the current run (flex) or stop index (fixed).
    int index = -1;
    std::vector<std::int64_t> pickups;
    std::vector<std::int64_t> dropoffs;
};

// Ordered stop sequence a vehicle executes. cursor is the stop the vehicle is
// currently at (AtStop) or heading to (Moving); stops before cursor are done.
// The stop at cursor is committed and never modified by insertions.
struct RoutePlan {
    std::vector<RouteStop> stops;
    std::size_t cursor = 0;

    std::size_t remaining() const { return stops.size() - cursor; }
};

}  // namespace transit
