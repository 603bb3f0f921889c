#pragma once

#include <limits>
#include <vector>

#include "transit/engine.hpp"

namespace transit {

// Eq-style candidate count for inserting an OD pair into a plan of n
// remaining stops: n(n+1)/2, and 1 for an empty plan (O then D).
long long candidate_count(long long n);

struct OdCandidate {
    bool feasible = false;
    double increment_s = 0.0;  // route duration increase
    double impact = std::numeric_limits<double>::infinity();
    int k1 = 0;
    int k2 = 0;
    std::vector<RouteStop> tail;
    double expected_board = 0.0;
    double expected_alight = 0.0;
    long enumerated = 0;
};

class OnDemandPolicy : public Policy {
public:
    void init(World& w) override;
    void on_request(World& w, std::size_t pax_idx) override;
    void on_dispatch(World& w, Vehicle& v) override;
    void process_arrival(World& w, Vehicle& v, double t) override;

    // Exposed for tests and the insertion oracle.
    OdCandidate best_insertion(World& w, const Vehicle& v, const PaxRecord& p) const;

    // Depots evenly spaced along the line (midpoint when S_d = 1).
    static std::vector<Point> depot_layout(const OnDemandDesign& d, const ScenarioParams& s);

private:
    struct Eval {
        bool feasible = false;
        double completion = 0.0;
        double user_time = 0.0;
        double cand_board = 0.0;
        double cand_alight = 0.0;
    };
    Eval evaluate_patch(const World& w, const Vehicle& v, const struct TailPatch& patch,
                        const PaxRecord* cand) const;
};

}  // namespace transit
