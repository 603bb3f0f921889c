#pragma once

#include <map>
#include <string>
#include <vector>

#include "transit/config.hpp"
#include "transit/metrics.hpp"

namespace transit {

struct SweepRun {
    std::size_t scenario = 0;
    std::size_t design = 0;
    std::size_t seed_idx = 0;
    bool ok = false;
    std::string error;
    RunReport report;
};

struct SweepResult {
    std::vector<SweepRun> runs;  // ordered by (scenario, design, seed)
    long long expected_runs = 0;
    int failures = 0;

    std::string reports_csv() const;
    // Table 4/5/6-shaped comparison: rows = scenarios, columns = designs,
    // cell = KPI averaged over seeds. kpi in {ridership, avg_wtt, vmt}.
    std::string table_csv(const Config& cfg, const std::string& kpi) const;
};

// Executes every (scenario, design, seed) combination. Demand is generated
// once per (scenario, seed) and shared across designs. Runs execute in
// parallel up to `parallelism` threads; outputs are merged in deterministic
// order, so results are identical for any parallelism degree.
SweepResult run_sweep(const Config& cfg, int parallelism);

}  // namespace transit
