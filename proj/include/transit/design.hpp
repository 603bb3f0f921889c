#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace transit {

// Insertion objective for the demand-responsive policies. VehicleTime ranks
// candidates by route duration increment; WeightedPassengerTime by the
// gamma-weighted user time increment.
enum class InsertionObjective { VehicleTime, WeightedPassengerTime };

struct FixedDesign {
    int S = 57;           // stop count
    double f = 5.0;       // frequency (veh/h)
    int V = 15;           // fleet size
    int K = 85;           // vehicle capacity
    double t_d = 20.0;    // dwell time (s)
    double t_c = 5280.0;  // one-way cycle time (s)
    // Optional irregular stop layout (x positions, km). Empty = evenly spaced.
    std::vector<double> stop_x;
};

struct FlexDesign {
    int S_c = 10;           // checkpoint count
    double f = 5.0;
    int V = 20;
    int K = 40;
    double t_d = 20.0;
    double t_c = 7200.0;    // one-way cycle time incl. slack (s)
    double zeta_w = 720.0;  // max wait (s)
    double zeta_b = 0.4;    // max backtracking distance per section (km)
    bool walking_enabled = true;  // true = extended MAST, false = original
};

struct OnDemandDesign {
    int S_d = 10;            // depot count
    int V = 40;
    int K = 20;
    double t_d = 20.0;
    double zeta_w = 1800.0;  // max wait (s)
    double zeta_d = 2.0;     // max detour time rate
    std::vector<int> mu_s;   // vehicles per depot; empty = as uniform as possible
    InsertionObjective objective = InsertionObjective::WeightedPassengerTime;
};

using DesignParams = std::variant<FixedDesign, FlexDesign, OnDemandDesign>;

struct SystemDesign {
    std::string id = "design";
    DesignParams params;

    const FixedDesign* fixed() const { return std::get_if<FixedDesign>(&params); }
    const FlexDesign* flex() const { return std::get_if<FlexDesign>(&params); }
    const OnDemandDesign* ondemand() const { return std::get_if<OnDemandDesign>(&params); }

    const char* type_name() const;
    int fleet_size() const;
    int capacity() const;

    // Throws std::invalid_argument naming the offending parameter.
    void validate() const;
};

// Per-segment slack time of a flex design (s): t_c/(S_c-1) - t_t - t_d.
double flex_segment_travel_time(const FlexDesign& d, double L, double v_o);
double flex_segment_slack(const FlexDesign& d, double L, double v_o);

// Effective vehicles-per-depot allocation (uniform fill when mu_s is empty).
std::vector<int> depot_allocation(const OnDemandDesign& d);

// Warm-up period before demand starts: 2*t_c for line services, 0 for
// on-demand (vehicles start already positioned at depots).
double warmup_duration(const SystemDesign& design);

}  // namespace transit
