#include "transit/fixed_cost.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace transit {

void FixedCostParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) throw std::invalid_argument(std::string(name) + " must be > 0");
    };
    positive(c, "c");
    positive(P_a, "P_a");
    positive(P_w, "P_w");
    positive(P_v, "P_v");
    positive(beta, "beta");
    positive(t_s, "t_s");
    positive(l, "l");
    positive(N, "N");
    positive(L, "L");
    positive(v_w, "v_w");
    positive(v_o, "v_o");
    if (l > L) throw std::invalid_argument("l must not exceed L");
}

double cycle_time_h(int S, double f, const FixedCostParams& p) {
    return p.L / p.v_o + p.beta * p.N / f + S * p.t_s;
}

CostBreakdown total_cost(int S, double f, const FixedCostParams& p) {
    CostBreakdown b;
    b.t_c = cycle_time_h(S, f, p);
    b.C_o = p.c * f * b.t_c;
    b.access = p.P_a * (p.L / (2.0 * p.v_w * S)) * p.N;
    b.wait = p.P_w * (1.0 / (2.0 * f)) * p.N;
    b.invehicle = p.P_v * (p.l / p.L) * b.t_c * p.N;
    b.C_u = b.access + b.wait + b.invehicle;
    b.C_t = b.C_o + b.C_u;
    return b;
}

OptimalDesign optimize_design(const FixedCostParams& p, int S_min, int S_max,
                              const std::vector<double>& f_grid) {
    if (S_min < 2 || S_max < S_min) throw std::invalid_argument("empty S range");
    if (f_grid.empty()) throw std::invalid_argument("empty f grid");

    OptimalDesign best;
    bool have = false;
    for (int S = S_min; S <= S_max; ++S) {
        for (double f : f_grid) {
            CostBreakdown b = total_cost(S, f, p);
            if (!have || b.C_t < best.cost.C_t) {
                best = {S, f, b};
                have = true;
            }
            // Ties resolve to the first (smallest S, then smallest f) because
            // the enumeration order is S-major over an ascending grid.
        }
    }
    return best;
}

std::vector<double> frequency_grid(double f_min, double f_max, double step) {
    if (!(f_min > 0.0) || !(step > 0.0) || f_max < f_min)
        throw std::invalid_argument("invalid frequency grid");
    std::vector<double> g;
    int n = static_cast<int>(std::floor((f_max - f_min) / step + 1e-9));
    for (int i = 0; i <= n; ++i) g.push_back(f_min + i * step);
    return g;
}

std::string cost_surface_csv(const FixedCostParams& p, int S_min, int S_max,
                             const std::vector<double>& f_grid) {
    std::string out = "S,f,C_o,C_u,C_t\n";
    char buf[160];
    for (int S = S_min; S <= S_max; ++S) {
        for (double f : f_grid) {
            CostBreakdown b = total_cost(S, f, p);
            std::snprintf(buf, sizeof(buf), "%d,%.6g,%.6f,%.6f,%.6f\n", S, f, b.C_o, b.C_u, b.C_t);
            out += buf;
        }
    }
    OptimalDesign best = optimize_design(p, S_min, S_max, f_grid);
    std::snprintf(buf, sizeof(buf), "argmin,%d,%.6g,%.6f\n", best.S, best.f, best.cost.C_t);
    out += buf;
    return out;
}

}  // namespace transit
