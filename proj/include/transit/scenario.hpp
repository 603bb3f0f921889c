#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "transit/geometry.hpp"

namespace transit {

// Operating-environment parameters shared by every policy. Lengths are km,
// speeds km/h, rates passengers/h, durations seconds.
struct ScenarioParams {
    std::string id = "scenario";
    double L = 13.12;        // route length
    double W = 1.6;          // service region width
    double lambda = 80.0;    // passenger arrival rate (pax/h)
    double v_w = 5.0;        // walking speed
    double zeta_a = 0.8;     // max walking distance
    double v_o = 11.41;      // vehicle running speed
    double gamma_v = 1.0;    // in-vehicle time weight
    double gamma_w = 1.59;   // wait time weight
    double gamma_a = 1.79;   // access time weight
    double sim_length = 14400.0;
    double time_step = 1.0;
    std::uint64_t seed = 1;
    Metric metric = Metric::Rectilinear;

    double dist(const Point& p, const Point& q) const { return distance(p, q, metric); }

    bool contains(const Point& p) const {
        return p.x >= 0.0 && p.x <= L && p.y >= 0.0 && p.y <= W;
    }

    void validate() const {
        auto positive = [](double v, const char* name) {
            if (!(v > 0.0)) throw std::invalid_argument(std::string(name) + " must be > 0");
        };
        positive(L, "L");
        positive(W, "W");
        if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
        positive(v_w, "v_w");
        positive(zeta_a, "zeta_a");
        positive(v_o, "v_o");
        if (gamma_v < 0.0 || gamma_w < 0.0 || gamma_a < 0.0)
            throw std::invalid_argument("gamma_v/gamma_w/gamma_a must be >= 0");
        positive(sim_length, "sim_length");
        positive(time_step, "time_step");
        double steps = sim_length / time_step;
        if (std::abs(steps - std::round(steps)) > 1e-9)
            throw std::invalid_argument("time_step must divide sim_length");
    }
};

}  // namespace transit
