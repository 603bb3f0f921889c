#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "transit/demand.hpp"
#include "transit/engine.hpp"
#include "transit/metrics.hpp"
#include "transit/policy_ondemand.hpp"

using namespace transit;
using namespace transit::testing;

namespace {

struct OdFixture {
    ScenarioParams s;
    SystemDesign design;
    World w;
    OnDemandPolicy policy;

    explicit OdFixture(SystemDesign d) : s(b63_scenario(0.0)), design(std::move(d)), w(s, design) {
        w.policy = &policy;
        w.horizon = 1e9;
        policy.init(w);
        w.clock = 0.0;
    }

    PaxRecord& add_pax(std::int64_t id, double arrival, Point o, Point d) {
        PaxRecord r;
        r.req = {id, arrival, o, d};
        r.arrival_abs = arrival;
        r.direct_ride_s = w.dist(o, d) / w.speed_kms();
        w.pax.push_back(std::move(r));
        w.pax_by_id[id] = w.pax.size() - 1;
        ++w.unfinished;
        return w.pax.back();
    }
};

SystemDesign small_od(int V, int K, int S_d = 1) {
    OnDemandDesign d;
    d.V = V;
    d.K = K;
    d.S_d = S_d;
    SystemDesign sd;
    sd.id = "od";
    sd.params = d;
    return sd;
}

}  // namespace

TEST_CASE("candidate_count follows n(n+1)/2 with the empty-plan special case") {
    CHECK(candidate_count(0) == 1);
    CHECK(candidate_count(1) == 1);
    CHECK(candidate_count(3) == 6);
    CHECK(candidate_count(10) == 55);
    for (long long n = 1; n <= 20; ++n) CHECK(candidate_count(n) == n * (n + 1) / 2);
}

TEST_CASE("depot layout: evenly spaced, midpoint when single") {
    ScenarioParams s = b63_scenario();
    OnDemandDesign d;
    d.S_d = 10;
    auto pts = OnDemandPolicy::depot_layout(d, s);
    REQUIRE(pts.size() == 10);
    CHECK(pts.front().x == doctest::Approx(0.0));
    CHECK(pts.back().x == doctest::Approx(13.12));
    CHECK(pts[1].x == doctest::Approx(13.12 / 9.0));
    d.S_d = 1;
    auto single = OnDemandPolicy::depot_layout(d, s);
    CHECK(single[0].x == doctest::Approx(13.12 / 2.0));
}

TEST_CASE("uniform mu_s puts 4 vehicles on each of 10 depots") {
    OdFixture f(ondemand_design());  // S_d=10, V=40
    REQUIRE(f.w.vehicles.size() == 40);
    int per_depot[10] = {0};
    for (const auto& v : f.w.vehicles) {
        int d = static_cast<int>(std::round(v.position.x / (13.12 / 9.0)));
        ++per_depot[d];
        CHECK(v.phase == VehiclePhase::Parked);
        CHECK(v.dispatched);
    }
    for (int i = 0; i < 10; ++i) CHECK(per_depot[i] == 4);
}

TEST_CASE("mu_s must sum to V") {
    OnDemandDesign d;
    d.S_d = 2;
    d.V = 5;
    d.mu_s = {2, 2};  // sums to 4
    SystemDesign sd;
    sd.params = d;
    CHECK_THROWS_WITH_AS(sd.validate(), doctest::Contains("mu_s"), std::invalid_argument);
}

TEST_CASE("idle vehicle at the origin: plan [O, D], zero wait, direct ride") {
    OdFixture f(small_od(1, 8));
    Vehicle& v = f.w.vehicles[0];
    Point o = v.position;
    Point d{o.x + 1.0, o.y + 0.3};
    PaxRecord& p = f.add_pax(1, 0.0, o, d);
    OdCandidate c = f.policy.best_insertion(f.w, v, p);
    REQUIRE(c.feasible);
    CHECK(c.enumerated == 1);
    REQUIRE(c.tail.size() == 2);
    CHECK(c.tail[0].location == o);
    CHECK(c.tail[1].location == d);
    CHECK(c.expected_board == doctest::Approx(0.0));
    CHECK(c.expected_alight == doctest::Approx(p.direct_ride_s));
}

TEST_CASE("capacity 1: only post-drop-off insertions are feasible") {
    OdFixture f(small_od(1, 1));
    Vehicle& v = f.w.vehicles[0];
    // Passenger 1 is onboard heading to their drop-off.
    PaxRecord& p1 = f.add_pax(1, 0.0, v.position, {v.position.x + 2.0, v.position.y});
    f.policy.on_request(f.w, 0);
    REQUIRE(p1.state == PaxState::WaitingAtStop);

    PaxRecord& p2 = f.add_pax(2, 0.0, {v.position.x + 0.5, 0.2}, {v.position.x + 3.0, 1.2});
    OdCandidate c = f.policy.best_insertion(f.w, v, p2);
    REQUIRE(c.feasible);
    // The new pickup cannot precede the committed drop-off.
    std::size_t drop1 = 0, pick2 = 0;
    for (std::size_t i = 0; i < c.tail.size(); ++i) {
        for (auto id : c.tail[i].dropoffs)
            if (id == 1) drop1 = i;
        for (auto id : c.tail[i].pickups)
            if (id == 2) pick2 = i;
    }
    CHECK(pick2 > drop1);
}

TEST_CASE("argmin across vehicles, ties to the lower id") {
    OdFixture f(small_od(2, 8, 2));  // depots at x=0 and x=L
    Vehicle& near = f.w.vehicles[0];
    PaxRecord& p = f.add_pax(1, 0.0, {1.0, 0.8}, {4.0, 0.8});
    f.policy.on_request(f.w, 0);
    CHECK(p.vehicle == near.id);  // 90 s away beats the far vehicle
}

TEST_CASE("all vehicles infeasible rejects the passenger immediately") {
    SystemDesign sd = small_od(1, 8);
    std::get<OnDemandDesign>(sd.params).zeta_w = 60.0;  // 1 min max wait
    OdFixture f(sd);
    // The single vehicle sits at L/2; a pickup at the far end cannot make it.
    PaxRecord& p = f.add_pax(1, 0.0, {0.0, 0.0}, {3.0, 1.2});
    f.policy.on_request(f.w, 0);
    CHECK(p.state == PaxState::Rejected);
    CHECK(p.rejected_time == doctest::Approx(0.0));
}

TEST_CASE("committed stop order is never permuted by later insertions") {
    OdFixture f(small_od(1, 8));
    Vehicle& v = f.w.vehicles[0];
    std::vector<std::pair<std::int64_t, bool>> committed;  // (pax, is_pickup) in order
    for (int i = 0; i < 6; ++i) {
        f.add_pax(i + 1, 0.0, {1.0 + i, 0.4}, {2.0 + i, 1.2});
        std::vector<std::pair<std::int64_t, bool>> before;
        for (std::size_t k = v.plan.cursor; k < v.plan.stops.size(); ++k) {
            for (auto id : v.plan.stops[k].pickups) before.push_back({id, true});
            for (auto id : v.plan.stops[k].dropoffs) before.push_back({id, false});
        }
        f.policy.on_request(f.w, static_cast<std::size_t>(i));
        if (f.w.pax[i].state == PaxState::Rejected) continue;
        std::vector<std::pair<std::int64_t, bool>> after;
        for (std::size_t k = v.plan.cursor; k < v.plan.stops.size(); ++k) {
            for (auto id : v.plan.stops[k].pickups) after.push_back({id, true});
            for (auto id : v.plan.stops[k].dropoffs) after.push_back({id, false});
        }
        // `before` must be a subsequence of `after` in order.
        std::size_t j = 0;
        for (const auto& item : after)
            if (j < before.size() && item == before[j]) ++j;
        CHECK(j == before.size());
    }
}

TEST_CASE("full on-demand run: thresholds audited clean") {
    ScenarioParams s = b63_scenario(80.0, 31);
    auto demand = generate_passengers(s, 0.0, s.sim_length);
    SystemDesign design = ondemand_design();
    RunResult r = run_simulation(s, design, demand);
    RunReport rep = aggregate(r, s, design);
    CHECK(rep.total_ridership + rep.rejected == static_cast<long long>(demand.size()));
    CHECK(rep.total_ridership > 0);
    CHECK(r.audit.max_wait_over_s <= 1e-3);
    CHECK(r.audit.max_ride_over_s <= 1e-3);
    CHECK(r.audit.max_load <= design.capacity());
    // Door-to-door service has no walking legs at all.
    for (const auto& o : rep.per_passenger) {
        CHECK(o.t_access_s == doctest::Approx(0.0));
        CHECK(o.t_egress_s == doctest::Approx(0.0));
    }
}
