#include <doctest.h>

#include <cmath>
#include <sstream>

#include "transit/demand.hpp"

using namespace transit;

namespace {

ScenarioParams b63() {
    ScenarioParams s;
    s.seed = 42;
    return s;
}

}  // namespace

TEST_CASE("zero rate gives an empty list") {
    ScenarioParams s = b63();
    s.lambda = 0.0;
    CHECK(generate_passengers(s, 0.0, s.sim_length).empty());
}

TEST_CASE("poisson counts land inside the 3-sigma band") {
    // lambda = 80/h over 4 h: mean 320, band +-3*sqrt(320) ~ 54
    for (std::uint64_t seed : {1ull, 7ull, 99ull, 1234ull}) {
        ScenarioParams s = b63();
        s.seed = seed;
        auto pax = generate_passengers(s, 0.0, s.sim_length);
        CHECK(pax.size() >= 266);
        CHECK(pax.size() <= 374);
    }
}

TEST_CASE("identical seed and params give byte-identical lists") {
    ScenarioParams s = b63();
    s.lambda = 400.0;
    auto a = generate_passengers(s, 0.0, s.sim_length);
    auto b = generate_passengers(s, 0.0, s.sim_length);
    CHECK(demand_to_csv(a) == demand_to_csv(b));
    s.seed = 43;
    auto c = generate_passengers(s, 0.0, s.sim_length);
    CHECK(demand_to_csv(a) != demand_to_csv(c));
}

TEST_CASE("mean inter-arrival time within 3 standard errors") {
    ScenarioParams s = b63();
    s.lambda = 400.0;
    s.sim_length = 4 * 14400.0;
    auto pax = generate_passengers(s, 0.0, s.sim_length);
    REQUIRE(pax.size() >= 1000);
    double sum = 0.0;
    for (std::size_t i = 1; i < pax.size(); ++i) sum += pax[i].arrival_s - pax[i - 1].arrival_s;
    double mean = sum / (pax.size() - 1);
    double expected = 3600.0 / s.lambda;
    double se = expected / std::sqrt(static_cast<double>(pax.size() - 1));
    CHECK(std::abs(mean - expected) <= 3.0 * se);
}

TEST_CASE("OD pairs respect the zeta_a separation and the region") {
    ScenarioParams s = b63();
    s.lambda = 400.0;
    auto pax = generate_passengers(s, 0.0, s.sim_length);
    for (const auto& p : pax) {
        CHECK(rect_distance(p.origin, p.destination) > s.zeta_a);
        CHECK(s.contains(p.origin));
        CHECK(s.contains(p.destination));
        CHECK(p.arrival_s >= 0.0);
        CHECK(p.arrival_s < s.sim_length);
        CHECK(p.arrival_s == doctest::Approx(std::floor(p.arrival_s)));  // 1 s grid
    }
    for (std::size_t i = 1; i < pax.size(); ++i)
        CHECK(pax[i].arrival_s >= pax[i - 1].arrival_s);
}

TEST_CASE("degenerate geometry fails loudly instead of looping") {
    ScenarioParams s = b63();
    s.L = 0.3;
    s.W = 0.3;
    s.zeta_a = 0.8;  // no OD pair can be farther apart than L + W
    CHECK_THROWS_AS(generate_passengers(s, 0.0, s.sim_length), std::runtime_error);
}

TEST_CASE("CSV round-trip is exact") {
    ScenarioParams s = b63();
    auto pax = generate_passengers(s, 0.0, s.sim_length);
    auto back = parse_demand_csv(demand_to_csv(pax));
    REQUIRE(back.size() == pax.size());
    for (std::size_t i = 0; i < pax.size(); ++i) {
        CHECK(back[i].id == pax[i].id);
        CHECK(back[i].arrival_s == pax[i].arrival_s);
        CHECK(back[i].origin == pax[i].origin);
        CHECK(back[i].destination == pax[i].destination);
    }
    CHECK(demand_fingerprint(back) == demand_fingerprint(pax));
}

TEST_CASE("arrival outside the demand window is rejected with the line number") {
    std::string csv =
        "id,arrival_s,ox_km,oy_km,dx_km,dy_km\n"
        "1,20000,1,0.5,5,0.5\n";
    DemandLoadOptions opt;
    opt.window_length = 14400.0;
    CHECK_THROWS_WITH_AS(parse_demand_csv(csv, opt), doctest::Contains("line 2"),
                         std::runtime_error);
}

TEST_CASE("walkable OD pair warns but is retained") {
    std::string csv =
        "id,arrival_s,ox_km,oy_km,dx_km,dy_km\n"
        "1,10,1,0.5,1.2,0.5\n";
    DemandLoadOptions opt;
    opt.zeta_a = 0.8;
    std::ostringstream warn;
    opt.warnings = &warn;
    auto pax = parse_demand_csv(csv, opt);
    CHECK(pax.size() == 1);
    CHECK(warn.str().find("walkable") != std::string::npos);
}
