#include <doctest.h>

#include "helpers.hpp"
#include "transit/demand.hpp"
#include "transit/engine.hpp"
#include "transit/metrics.hpp"

using namespace transit;
using namespace transit::testing;

TEST_CASE("weighted travel time arithmetic") {
    PassengerOutcome o;
    o.t_invehicle_s = 20 * 60;
    o.t_wait_s = 5 * 60;
    o.t_access_s = 6 * 60;
    o.t_egress_s = 4 * 60;
    CHECK(weighted_travel_time_min(o, 1.0, 1.59, 1.79) == doctest::Approx(45.85));

    PassengerOutcome zero;
    CHECK(weighted_travel_time_min(zero, 1.0, 1.59, 1.79) == doctest::Approx(0.0));

    PassengerOutcome od;  // door-to-door: no walking legs
    od.t_invehicle_s = 15 * 60;
    od.t_wait_s = 4 * 60;
    CHECK(weighted_travel_time_min(od, 1.0, 1.59, 1.79) == doctest::Approx(21.36));
}

TEST_CASE("zero served leaves the average absent") {
    ScenarioParams s = b63_scenario(0.0);
    SystemDesign design = ondemand_design();
    RunResult r = run_simulation(s, design, {});
    RunReport rep = aggregate(r, s, design);
    CHECK(rep.total_ridership == 0);
    CHECK(!rep.avg_weighted_travel_time_min.has_value());
    std::string row = report_csv_row(rep);
    CHECK(row.find(",,") != std::string::npos);  // empty avg_wtt field
}

TEST_CASE("conservation identity and per-vehicle sum hold in reports") {
    ScenarioParams s = b63_scenario(80.0, 17);
    auto demand = generate_passengers(s, 0.0, s.sim_length);
    SystemDesign design = ondemand_design();
    RunReport rep = aggregate(run_simulation(s, design, demand), s, design);
    CHECK(rep.total_ridership + rep.rejected == static_cast<long long>(demand.size()));
    double sum = 0.0;
    for (double v : rep.per_vehicle_vmt_mi) sum += v;
    CHECK(rep.total_vmt_mi == doctest::Approx(sum).epsilon(1e-9));
    CHECK(rep.per_passenger.size() == demand.size());
}

TEST_CASE("aggregate runs the weighted-time double entry off the event log") {
    ScenarioParams s = b63_scenario(80.0, 23);
    auto demand = generate_passengers(s, 0.0, s.sim_length);
    SystemDesign design = flex_design(10);
    RunResult r = run_simulation(s, design, demand);
    CHECK_NOTHROW(aggregate(r, s, design));
    // Corrupt one board event: the double entry must catch it.
    for (auto& e : r.events) {
        if (e.type == "board") {
            e.t += 120.0;
            break;
        }
    }
    CHECK_THROWS_WITH_AS(aggregate(r, s, design), doctest::Contains("double entry"),
                         std::runtime_error);
}

TEST_CASE("compare: self-comparison has unit ratios, fingerprints enforced") {
    ScenarioParams s = b63_scenario(80.0, 3);
    auto demand = generate_passengers(s, 0.0, s.sim_length);
    SystemDesign design = fixed_existing();
    RunReport rep = aggregate(run_simulation(s, design, demand), s, design);

    std::string csv = compare_csv({rep, rep});
    CHECK(csv.find(",1.0000,") != std::string::npos);

    RunReport other = rep;
    other.fingerprint = "deadbeefdeadbeef";
    CHECK_THROWS_WITH_AS(compare_csv({rep, other}), doctest::Contains("fingerprint"),
                         std::invalid_argument);
}

TEST_CASE("events and trace CSVs are well-formed") {
    ScenarioParams s = b63_scenario(0.0);
    s.L = 0.5;
    s.sim_length = 300.0;
    FixedDesign d;
    d.S = 2;
    d.V = 1;
    d.t_c = 200.0;
    SystemDesign design;
    design.id = "mini";
    design.params = d;
    RunOptions opts;
    opts.record_trace = true;
    RunResult r = run_simulation(s, design, {}, opts);
    std::string ev = events_csv(r.events);
    CHECK(ev.find("t_s,event,passenger_id,vehicle_id,detail\n") == 0);
    std::string tr = trace_csv(r.trace);
    CHECK(tr.find("t_s,vehicle_id,x_km,y_km,state,onboard_count") == 0);
    CHECK(r.trace.size() == 300);  // one row per step per vehicle
}
