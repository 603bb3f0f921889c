#pragma once

#include <string>
#include <vector>

#include "transit/design.hpp"
#include "transit/fixed_cost.hpp"
#include "transit/scenario.hpp"

namespace transit {

struct OptimizerSpec {
    int S_min = 5;
    int S_max = 80;
    double f_min = 0.5;
    double f_max = 6.0;
    double f_step = 0.1;
};

// Parsed configuration. Designs are pre-resolved per scenario so that a
// design entry may carry per-scenario parameter overrides (e.g. the optimized
// fixed route re-tuned per demand level).
struct Config {
    std::vector<ScenarioParams> scenarios;
    std::vector<std::string> design_ids;
    // designs[d][s] = design d resolved for scenario s
    std::vector<std::vector<SystemDesign>> designs;
    std::vector<std::uint64_t> seeds;
    FixedCostParams cost;
    OptimizerSpec optimizer;
    bool trace = false;

    int design_index(const std::string& id) const;
    long long total_runs() const {
        return static_cast<long long>(seeds.size()) * scenarios.size() *
               (scenarios.empty() ? 0 : designs.size());
    }
};

// Strict parser: unknown keys and invariant violations are reported with the
// parameter name. The format allows // comments.
Config parse_config(const std::string& text);
Config load_config(const std::string& path);

}  // namespace transit
