#pragma once

#include <vector>

#include "transit/engine.hpp"

namespace transit {

// Stop layout on the line y = W/2. Evenly spaced with terminals at x = 0 and
// x = L unless the design carries explicit coordinates.
std::vector<Point> fixed_layout(const FixedDesign& d, const ScenarioParams& scenario);

struct FixedAssignment {
    int board = 0;
    int alight = 0;
    Direction direction = Direction::Forward;
};

// Nearest stop to the origin boards; nearest to the destination alights. Ties
// go to the lower index. When both map to the same stop the alighting stop is
// the best stop other than the boarding one, so every trip stays ridable.
FixedAssignment assign_fixed(const Point& origin, const Point& destination,
                             const std::vector<Point>& layout, Metric metric);

class FixedPolicy : public Policy {
public:
    void init(World& w) override;
    void on_request(World& w, std::size_t pax_idx) override;
    void on_dispatch(World& w, Vehicle& v) override;
    void process_arrival(World& w, Vehicle& v, double t) override;
    void on_departure(World& w, Vehicle& v, double t) override;

private:
    void board_from_queue(World& w, Vehicle& v, int stop_index, double latest_stop_arrival,
                          double board_floor);
    RoutePlan build_run(Direction dir) const;

    std::vector<Point> layout_;
    std::vector<double> arrival_time_;  // per vehicle, last stop arrival
};

}  // namespace transit
