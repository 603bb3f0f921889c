#pragma once

#include <limits>
#include <vector>

#include "transit/engine.hpp"

namespace transit {

// Derived per-run constants of the flex (MAST) policy.
struct FlexConfig {
    int S_c = 0;
    double t_d = 0.0;
    double t_c = 0.0;
    double zeta_w = 0.0;
    double zeta_b = 0.0;
    double seg_budget = 0.0;  // t_c / (S_c - 1): travel + deviations + dwell
    double t_t = 0.0;         // scheduled inter-checkpoint travel time
    double slack = 0.0;       // seg_budget - t_t - t_d
    bool walking_enabled = true;
};

struct FlexCandidate {
    bool feasible = false;
    double impact = std::numeric_limits<double>::infinity();
    int k1 = 0;
    int k2 = 0;
    ServiceMode mode = ServiceMode::FlexDirect;
    std::vector<RouteStop> tail;  // replacement for plan.stops[cursor..]
    Point board_point;
    Point alight_point;
    double stop_arrival = 0.0;    // expected arrival at the boarding point
    double expected_board = 0.0;
    double expected_alight = 0.0;
    long enumerated = 0;          // insertion positions examined
};

class FlexPolicy : public Policy {
public:
    void init(World& w) override;
    void on_request(World& w, std::size_t pax_idx) override;
    void on_step(World& w) override;
    void on_drain_start(World& w) override;
    void on_dispatch(World& w, Vehicle& v) override;
    void process_arrival(World& w, Vehicle& v, double t) override;

    // Exposed for tests and the insertion oracle.
    FlexCandidate best_direct_insertion(World& w, const Vehicle& v, const PaxRecord& p) const;
    FlexCandidate best_walking_insertion(World& w, const Vehicle& v, const PaxRecord& p) const;
    bool try_assign(World& w, std::size_t pax_idx);
    const FlexConfig& config() const { return cfg_; }

    static constexpr double kResurrectionPeriod = 30.0;  // s

private:
    struct Eval {
        bool feasible = false;
        double user_time = 0.0;   // committed+candidate gamma-weighted wait/ride
        double completion = 0.0;
        double cand_board = 0.0;
        double cand_alight = 0.0;
    };
    struct CandPax {
        std::int64_t id = 0;
        double walker_arrival = 0.0;  // earliest board time at the meeting point
        double arrival_abs = 0.0;
    };

    Eval evaluate_patch(const World& w, const Vehicle& v, const struct TailPatch& patch,
                        const CandPax* cand) const;
    RoutePlan build_run(Direction dir) const;
    double timetable_dep(const Vehicle& v, int ordinal) const {
        return v.run_start + ordinal * cfg_.seg_budget;
    }

    FlexConfig cfg_;
    std::vector<Point> checkpoints_;  // forward geographic order
};

}  // namespace transit
