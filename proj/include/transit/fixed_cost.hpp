#pragma once

#include <string>
#include <vector>

namespace transit {

// Inputs of the fixed-route total-cost model. Hours and $/h throughout;
// lengths km, speeds km/h.
struct FixedCostParams {
    double c = 120.0;          // unit bus operating cost ($/bus-h)
    double P_a = 25.0;         // value of access time ($/h)
    double P_w = 20.0;         // value of waiting time ($/h)
    double P_v = 12.0;         // value of in-vehicle time ($/h)
    double beta = 10.0 / 3600.0;  // boarding/alighting time per passenger (h)
    double t_s = 20.0 / 3600.0;   // stopping delay per stop (h)
    double l = 6.56;           // average travel distance per passenger (km)
    double N = 80.0;           // passenger demand (pax/h)
    double L = 13.12;          // line length (km)
    double v_w = 5.0;          // walking speed (km/h)
    double v_o = 11.41;        // bus operating speed (km/h)

    void validate() const;
};

struct CostBreakdown {
    double C_t = 0.0;
    double C_o = 0.0;
    double C_u = 0.0;
    double access = 0.0;   // P_a * L/(2 v_w S) * N
    double wait = 0.0;     // P_w * 1/(2f) * N
    double invehicle = 0.0;  // P_v * l/L * t_c * N
    double t_c = 0.0;      // cycle time (h)
};

// t_c = L/v_o + beta*N/f + S*t_s (h)
double cycle_time_h(int S, double f, const FixedCostParams& p);

CostBreakdown total_cost(int S, double f, const FixedCostParams& p);

struct OptimalDesign {
    int S = 0;
    double f = 0.0;
    CostBreakdown cost;
};

// Exhaustive enumeration over integer S in [S_min, S_max] x f_grid; ties go
// to smaller S, then smaller f.
OptimalDesign optimize_design(const FixedCostParams& p, int S_min, int S_max,
                              const std::vector<double>& f_grid);

std::vector<double> frequency_grid(double f_min, double f_max, double step);

// CSV sweep surface "S,f,C_o,C_u,C_t" for plotting, followed by the argmin row.
std::string cost_surface_csv(const FixedCostParams& p, int S_min, int S_max,
                             const std::vector<double>& f_grid);

}  // namespace transit
