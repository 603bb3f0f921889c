#pragma once

#include "transit/design.hpp"
#include "transit/scenario.hpp"

namespace transit::testing {

inline ScenarioParams b63_scenario(double lambda = 80.0, std::uint64_t seed = 1) {
    ScenarioParams s;
    s.id = "b63";
    s.lambda = lambda;
    s.seed = seed;
    return s;
}

inline SystemDesign fixed_existing() {
    SystemDesign d;
    d.id = "fixed_existing";
    d.params = FixedDesign{};  // S=57, f=5, V=15, K=85, t_d=20, t_c=5280
    return d;
}

inline SystemDesign flex_design(int S_c, bool walking = true) {
    FlexDesign f;
    f.S_c = S_c;
    f.walking_enabled = walking;
    SystemDesign d;
    d.id = walking ? ("flex" + std::to_string(S_c)) : ("flex" + std::to_string(S_c) + "_orig");
    d.params = f;
    return d;
}

inline SystemDesign ondemand_design() {
    SystemDesign d;
    d.id = "microtransit";
    d.params = OnDemandDesign{};  // S_d=10, V=40, K=20, zeta_w=1800, zeta_d=2
    return d;
}

}  // namespace transit::testing
