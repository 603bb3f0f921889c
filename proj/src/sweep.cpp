#include "transit/sweep.hpp"

#include <atomic>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include "transit/engine.hpp"

namespace transit {

std::string SweepResult::reports_csv() const {
    std::string s = report_csv_header();
    for (const auto& r : runs) {
        if (r.ok) s += report_csv_row(r.report);
    }
    return s;
}

std::string SweepResult::table_csv(const Config& cfg, const std::string& kpi) const {
    std::string s = "scenario,lambda";
    for (const auto& id : cfg.design_ids) s += "," + id;
    s += "\n";
    char buf[64];
    for (std::size_t sc = 0; sc < cfg.scenarios.size(); ++sc) {
        std::snprintf(buf, sizeof(buf), "%s,%g", cfg.scenarios[sc].id.c_str(),
                      cfg.scenarios[sc].lambda);
        s += buf;
        for (std::size_t d = 0; d < cfg.designs.size(); ++d) {
            double sum = 0.0;
            int n = 0;
            for (const auto& r : runs) {
                if (!r.ok || r.scenario != sc || r.design != d) continue;
                if (kpi == "ridership") sum += static_cast<double>(r.report.total_ridership);
                else if (kpi == "avg_wtt")
                    sum += r.report.avg_weighted_travel_time_min.value_or(0.0);
                else if (kpi == "vmt") sum += r.report.total_vmt_mi;
                else throw std::invalid_argument("unknown kpi " + kpi);
                ++n;
            }
            if (n > 0) {
                std::snprintf(buf, sizeof(buf), ",%.4f", sum / n);
                s += buf;
            } else {
                s += ",";
            }
        }
        s += "\n";
    }
    return s;
}

SweepResult run_sweep(const Config& cfg, int parallelism) {
    if (parallelism < 1) parallelism = 1;
    SweepResult out;
    const std::size_t n_sc = cfg.scenarios.size();
    const std::size_t n_d = cfg.designs.size();
    const std::size_t n_seed = cfg.seeds.size();
    out.expected_runs = static_cast<long long>(n_sc) * n_d * n_seed;

    // One demand list per (scenario, seed), shared by every design.
    std::vector<std::vector<Passenger>> demand(n_sc * n_seed);
    for (std::size_t sc = 0; sc < n_sc; ++sc) {
        for (std::size_t k = 0; k < n_seed; ++k) {
            ScenarioParams s = cfg.scenarios[sc];
            s.seed = cfg.seeds[k];
            demand[sc * n_seed + k] = generate_passengers(s, 0.0, s.sim_length);
        }
    }

    out.runs.resize(n_sc * n_d * n_seed);
    std::size_t job = 0;
    for (std::size_t sc = 0; sc < n_sc; ++sc)
        for (std::size_t d = 0; d < n_d; ++d)
            for (std::size_t k = 0; k < n_seed; ++k)
                out.runs[job++] = {sc, d, k, false, "", {}};

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= out.runs.size()) return;
            SweepRun& r = out.runs[i];
            ScenarioParams s = cfg.scenarios[r.scenario];
            s.seed = cfg.seeds[r.seed_idx];
            const SystemDesign& design = cfg.designs[r.design][r.scenario];
            try {
                RunResult rr =
                    run_simulation(s, design, demand[r.scenario * n_seed + r.seed_idx]);
                r.report = aggregate(rr, s, design);
                r.ok = true;
            } catch (const std::exception& e) {
                r.ok = false;
                r.error = e.what();
            }
        }
    };
    if (parallelism == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (int i = 0; i < parallelism; ++i) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }

    if (static_cast<long long>(out.runs.size()) != out.expected_runs)
        throw std::runtime_error("sweep run count does not match N_total");
    for (const auto& r : out.runs)
        if (!r.ok) ++out.failures;
    return out;
}

}  // namespace transit
