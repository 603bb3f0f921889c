#include <doctest.h>

#include "transit/config.hpp"
#include "transit/demand.hpp"
#include "transit/engine.hpp"
#include "transit/metrics.hpp"
#include "transit/sweep.hpp"

using namespace transit;

namespace {

const char* kMiniConfig = R"({
  "simulation": { "sim_length": 14400, "time_step": 1, "seed": 7 },
  "scenario": { "L": 13.12, "W": 1.6, "lambda": 40, "v_w": 5, "zeta_a": 0.8,
                "v_o": 11.41, "gamma_v": 1, "gamma_w": 1.59, "gamma_a": 1.79 },
  "designs": [
    { "id": "fixed", "type": "fixed", "S": 57, "f": 5, "V": 15, "K": 85,
      "t_d": 20, "t_c": 5280 }
  ]
})";

}  // namespace

TEST_CASE("bundled case study resolves to the 15-run matrix") {
    Config cfg = load_config(CONFIG_DIR "/b63_case_study.json");
    CHECK(cfg.scenarios.size() == 3);
    CHECK(cfg.designs.size() == 5);
    CHECK(cfg.seeds.size() == 1);
    CHECK(cfg.total_runs() == 15);  // N_total = N_dp * sum_i N_vs,i

    // per-scenario overrides of the optimized fixed design
    int d = cfg.design_index("fixed_optimized");
    CHECK(std::get<FixedDesign>(cfg.designs[d][0].params).S == 30);
    CHECK(std::get<FixedDesign>(cfg.designs[d][1].params).S == 33);
    CHECK(std::get<FixedDesign>(cfg.designs[d][2].params).f == doctest::Approx(3.6));
    CHECK(std::get<FixedDesign>(cfg.designs[d][0].params).K == 85);  // shared keys kept
}

TEST_CASE("negative lambda is rejected naming the parameter") {
    std::string bad = kMiniConfig;
    bad.replace(bad.find("\"lambda\": 40"), 12, "\"lambda\": -4");
    CHECK_THROWS_WITH_AS(parse_config(bad), doctest::Contains("lambda"),
                         std::invalid_argument);
}

TEST_CASE("unknown keys are rejected by name") {
    std::string bad = kMiniConfig;
    bad.replace(bad.find("\"lambda\""), 8, "\"lambdaa\"");
    CHECK_THROWS_WITH_AS(parse_config(bad), doctest::Contains("lambdaa"),
                         std::invalid_argument);
}

TEST_CASE("optional settings default") {
    Config cfg = parse_config(kMiniConfig);
    CHECK(cfg.trace == false);
    CHECK(cfg.seeds == std::vector<std::uint64_t>{7});
    CHECK(cfg.optimizer.S_min == 5);
    CHECK(cfg.cost.N == doctest::Approx(40.0));  // defaults follow the scenario
}

TEST_CASE("single-cell sweep equals a direct run") {
    Config cfg = parse_config(kMiniConfig);
    SweepResult res = run_sweep(cfg, 1);
    REQUIRE(res.runs.size() == 1);
    REQUIRE(res.failures == 0);

    ScenarioParams s = cfg.scenarios[0];
    s.seed = cfg.seeds[0];
    auto demand = generate_passengers(s, 0.0, s.sim_length);
    RunReport direct = aggregate(run_simulation(s, cfg.designs[0][0], demand), s,
                                 cfg.designs[0][0]);
    CHECK(report_csv_row(res.runs[0].report) == report_csv_row(direct));
}

TEST_CASE("more seeds multiply the run count") {
    std::string two = kMiniConfig;
    two.insert(two.rfind('}'), ", \"seeds\": [1, 2]");
    Config cfg = parse_config(two);
    CHECK(cfg.total_runs() == 2);
    SweepResult res = run_sweep(cfg, 1);
    CHECK(res.runs.size() == 2);
}

TEST_CASE("sweep output is invariant to parallelism") {
    Config cfg = load_config(CONFIG_DIR "/b63_case_study.json");
    // Keep it light: the low-demand scenario with all five designs.
    cfg.scenarios.resize(1);
    for (auto& per_scenario : cfg.designs) per_scenario.resize(1);
    SweepResult serial = run_sweep(cfg, 1);
    SweepResult parallel = run_sweep(cfg, 4);
    REQUIRE(serial.failures == 0);
    REQUIRE(parallel.failures == 0);
    CHECK(serial.reports_csv() == parallel.reports_csv());
    CHECK(serial.table_csv(cfg, "ridership") == parallel.table_csv(cfg, "ridership"));
    CHECK(serial.table_csv(cfg, "vmt") == parallel.table_csv(cfg, "vmt"));
}

TEST_CASE("gen-demand then run equals in-process generation") {
    Config cfg = parse_config(kMiniConfig);
    ScenarioParams s = cfg.scenarios[0];
    s.seed = 7;
    auto inproc = generate_passengers(s, 0.0, s.sim_length);
    auto roundtrip = parse_demand_csv(demand_to_csv(inproc));
    RunReport a = aggregate(run_simulation(s, cfg.designs[0][0], inproc), s,
                            cfg.designs[0][0]);
    RunReport b = aggregate(run_simulation(s, cfg.designs[0][0], roundtrip), s,
                            cfg.designs[0][0]);
    CHECK(report_csv_row(a) == report_csv_row(b));
    CHECK(per_passenger_csv(a) == per_passenger_csv(b));
    CHECK(a.fingerprint == b.fingerprint);
}
