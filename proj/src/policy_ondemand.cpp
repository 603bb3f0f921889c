#include "transit/policy_ondemand.hpp"

#include <algorithm>
#include <cstdio>

#include "tail_patch.hpp"

namespace transit {

namespace {

struct ScratchBufs {
    std::vector<double> arr;
    std::vector<std::pair<std::int64_t, std::size_t>> boards;
    std::vector<std::pair<std::int64_t, std::size_t>> alights;
};

ScratchBufs& scratch() {
    thread_local ScratchBufs bufs;
    return bufs;
}

}  // namespace

long long candidate_count(long long n) {
    if (n <= 0) return 1;
    return n * (n + 1) / 2;
}

std::vector<Point> OnDemandPolicy::depot_layout(const OnDemandDesign& d,
                                                const ScenarioParams& s) {
    std::vector<Point> pts;
    const double y = s.W / 2.0;
    if (d.S_d == 1) {
        pts.push_back({s.L / 2.0, y});
        return pts;
    }
    for (int i = 0; i < d.S_d; ++i)
        pts.push_back({static_cast<double>(i) * s.L / (d.S_d - 1), y});
    return pts;
}

void OnDemandPolicy::init(World& w) {
    const OnDemandDesign& d = *w.design.ondemand();
    std::vector<Point> depots = depot_layout(d, w.scenario);
    std::vector<int> alloc = depot_allocation(d);
    int id = 1;
    for (int s = 0; s < d.S_d; ++s) {
        for (int k = 0; k < alloc[s]; ++k) {
            Vehicle v;
            v.id = id++;
            v.capacity = d.K;
            v.position = depots[s];
            v.dispatched = true;  // available from t = 0
            v.phase = VehiclePhase::Parked;
            w.vehicles.push_back(std::move(v));
        }
    }
}

void OnDemandPolicy::on_dispatch(World&, Vehicle&) {}

// Expected stop times and feasibility of one candidate plan: capacity on
// every leg, every passenger picked up within zeta_w of their request, and no
// ride longer than zeta_d times its direct time.
OnDemandPolicy::Eval OnDemandPolicy::evaluate_patch(const World& w, const Vehicle& v,
                                                    const TailPatch& patch,
                                                    const PaxRecord* cand) const {
    const OnDemandDesign& d = *w.design.ondemand();
    Eval ev;
    const double now = w.clock;
    const double vkms = w.speed_kms();
    const std::size_t n = patch.size();
    if (n == 0) {
        ev.feasible = true;
        ev.completion = now;
        return ev;
    }
    const bool at_stop = v.phase == VehiclePhase::AtStop && v.plan.cursor < v.plan.stops.size();

    ScratchBufs& sb = scratch();
    sb.arr.assign(n, 0.0);
    sb.boards.clear();
    sb.alights.clear();

    double t = now;
    Point prev = v.position;
    int load = static_cast<int>(v.onboard.size());
    for (std::size_t i = 0; i < n; ++i) {
        const RouteStop& s = patch.at(i);
        if (i == 0 && at_stop) {
            sb.arr[0] = now;
            t = v.departure_time;
            prev = s.location;
            continue;
        }
        double leg = w.dist(prev, s.location);
        sb.arr[i] = t + leg / vkms;
        t = sb.arr[i] + (leg <= kDistEps ? 0.0 : d.t_d);
        prev = s.location;

        const bool cand_pick = patch.cand_picks_at(i);
        const bool cand_drop = patch.cand_drops_at(i);
        load -= static_cast<int>(s.dropoffs.size()) + (cand_drop ? 1 : 0);
        load += static_cast<int>(s.pickups.size()) + (cand_pick ? 1 : 0);
        if (load > v.capacity) return ev;

        for (std::int64_t id : s.pickups) sb.boards.push_back({id, i});
        for (std::int64_t id : s.dropoffs) sb.alights.push_back({id, i});
        if (cand_pick) sb.boards.push_back({cand->req.id, i});
        if (cand_drop) sb.alights.push_back({cand->req.id, i});
    }
    ev.completion = t;

    double sum = 0.0;
    for (const auto& [id, ai] : sb.alights) {
        const bool is_cand = cand && id == cand->req.id;
        const PaxRecord& rec = is_cand ? *cand : w.rec(id);
        double board_t;
        double wait = 0.0;
        auto bit = std::find_if(sb.boards.begin(), sb.boards.end(),
                                [id = id](const auto& pr) { return pr.first == id; });
        if (bit != sb.boards.end()) {
            board_t = sb.arr[bit->second];
            wait = board_t - rec.arrival_abs;
            if (wait > d.zeta_w + (is_cand ? 0.0 : kTimeEps)) return ev;
        } else {
            board_t = rec.board_time;
        }
        double ride = sb.arr[ai] - board_t;
        if (ride > d.zeta_d * rec.direct_ride_s + (is_cand ? 0.0 : kTimeEps)) return ev;
        sum += w.scenario.gamma_w * wait + w.scenario.gamma_v * ride;
        if (is_cand) {
            ev.cand_board = board_t;
            ev.cand_alight = sb.arr[ai];
        }
    }
    ev.user_time = sum;
    ev.feasible = true;
    return ev;
}

OdCandidate OnDemandPolicy::best_insertion(World& w, const Vehicle& v,
                                           const PaxRecord& p) const {
    const OnDemandDesign& d = *w.design.ondemand();
    OdCandidate best;
    long enumerated = 0;

    const std::size_t n = v.plan.remaining();
    std::vector<RouteStop> rem(v.plan.stops.begin() + v.plan.cursor, v.plan.stops.end());
    TailPatch base_patch;
    base_patch.base = &rem;
    Eval base = evaluate_patch(w, v, base_patch, nullptr);
    if (!base.feasible) return best;

    RouteStop so;
    so.location = p.req.origin;
    so.pickups = {p.req.id};
    RouteStop sd;
    sd.location = p.req.destination;
    sd.dropoffs = {p.req.id};

    TailPatch patch;
    patch.base = &rem;
    patch.ins0 = &so;
    patch.ins1 = &sd;
    patch.cand = p.req.id;

    auto consider = [&](std::size_t o_pos, std::size_t d_pos, int k1, int k2) {
        ++enumerated;
        ++w.audit.insertion_candidates;
        patch.ins0_pos = o_pos;
        patch.ins1_pos = d_pos;
        Eval e = evaluate_patch(w, v, patch, &p);
        if (!e.feasible) return;
        double inc = e.completion - base.completion;
        double impact = d.objective == InsertionObjective::VehicleTime
                            ? inc
                            : e.user_time - base.user_time;
        if (!best.feasible || impact < best.impact) {
            best.feasible = true;
            best.impact = impact;
            best.increment_s = inc;
            best.k1 = k1;
            best.k2 = k2;
            best.tail = patch.materialize();
            best.expected_board = e.cand_board;
            best.expected_alight = e.cand_alight;
        }
    };

    if (n == 0) {
        consider(0, 1, 0, 0);
    } else {
        for (std::size_t k1 = 1; k1 <= n; ++k1)
            for (std::size_t k2 = k1; k2 <= n; ++k2)
                consider(k1, k2 + 1, static_cast<int>(k1), static_cast<int>(k2));
    }
    best.enumerated = enumerated;
    return best;
}

void OnDemandPolicy::on_request(World& w, std::size_t pax_idx) {
    PaxRecord& p = w.pax[pax_idx];
    OdCandidate best;
    int best_veh = -1;
    for (auto& v : w.vehicles) {
        OdCandidate c = best_insertion(w, v, p);
        if (c.feasible && (best_veh < 0 || c.impact < best.impact)) {
            best = std::move(c);
            best_veh = v.id;
        }
    }
    if (best_veh < 0) {
        w.event(w.clock, "reject_od", p.req.id, -1);
        w.finalize_reject(p, w.clock, /*quiet=*/true);
        return;
    }

    Vehicle& v = w.vehicles[static_cast<std::size_t>(best_veh - 1)];
    v.plan.stops.resize(v.plan.cursor);
    for (auto& s : best.tail) v.plan.stops.push_back(std::move(s));
    if (v.phase == VehiclePhase::Parked) {
        v.plan.cursor = v.plan.stops.size() - best.tail.size();
        v.phase = VehiclePhase::Moving;
        v.last_leg_dist = w.dist(v.position, v.plan.stops[v.plan.cursor].location);
        v.leg_start_time = w.clock;
    }

    p.vehicle = best_veh;
    p.mode = ServiceMode::DoorToDoor;
    p.board_point = p.req.origin;
    p.alight_point = p.req.destination;
    p.stop_arrival = p.arrival_abs;  // door-to-door: no access walk
    p.state = PaxState::WaitingAtStop;
    char detail[96];
    std::snprintf(detail, sizeof(detail), "k1=%d;k2=%d;increment_s=%.3f", best.k1, best.k2,
                  best.increment_s);
    w.event(w.clock, "assign_od", p.req.id, best_veh, detail);
}

void OnDemandPolicy::process_arrival(World& w, Vehicle& v, double t) {
    const OnDemandDesign& d = *w.design.ondemand();
    const RouteStop stop = v.plan.stops[v.plan.cursor];

    for (std::int64_t id : stop.dropoffs) {
        PaxRecord& p = w.rec(id);
        double ride = t - p.board_time;
        w.audit.max_ride_over_s =
            std::max(w.audit.max_ride_over_s, ride - d.zeta_d * p.direct_ride_s);
        if (ride > d.zeta_d * p.direct_ride_s + 1e-3)
            w.audit.violation("ride over zeta_d for pax " + std::to_string(id));
        w.alight_pax(p, v, t);
    }
    for (std::int64_t id : stop.pickups) {
        PaxRecord& p = w.rec(id);
        w.board_pax(p, v, t);
        double wait = t - p.arrival_abs;
        w.audit.max_wait_over_s = std::max(w.audit.max_wait_over_s, wait - d.zeta_w);
        if (wait > d.zeta_w + 1e-3)
            w.audit.violation("wait over zeta_w for pax " + std::to_string(id));
    }
    v.departure_time = t + (v.last_leg_dist <= kDistEps ? 0.0 : d.t_d);
}

}  // namespace transit
