#include "transit/engine.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <stdexcept>

#include "transit/policy_fixed.hpp"
#include "transit/policy_flex.hpp"
#include "transit/policy_ondemand.hpp"

namespace transit {

void World::event(double t, const char* type, std::int64_t pax_id, int veh, std::string detail) {
    if (!record_events) return;
    events.push_back({t, type, pax_id, veh, std::move(detail)});
}

void World::board_pax(PaxRecord& p, Vehicle& v, double board_time) {
    if (static_cast<int>(v.onboard.size()) >= v.capacity) {
        audit.violation("capacity exceeded boarding pax " + std::to_string(p.req.id) +
                        " on vehicle " + std::to_string(v.id));
        return;
    }
    v.onboard.push_back(p.req.id);
    audit.max_load = std::max(audit.max_load, static_cast<int>(v.onboard.size()));
    p.state = PaxState::Onboard;
    p.vehicle = v.id;
    p.board_time = board_time;
    if (board_time < p.stop_arrival - kTimeEps)
        audit.violation("pax " + std::to_string(p.req.id) + " boarded before reaching the stop");
    event(board_time, "board", p.req.id, v.id);
}

void World::alight_pax(PaxRecord& p, Vehicle& v, double t) {
    auto it = std::find(v.onboard.begin(), v.onboard.end(), p.req.id);
    if (it != v.onboard.end()) v.onboard.erase(it);
    p.alight_time = t;
    event(t, "alight", p.req.id, v.id);
    double egress = walk_time_s(dist(p.alight_point, p.req.destination), scenario.v_w);
    p.served_time = t + egress;
    if (egress <= kTimeEps) {
        p.state = PaxState::Served;
        --unfinished;
        event(t, "served", p.req.id, v.id);
    } else {
        p.state = PaxState::Egressing;
        egressing.push_back(pax_by_id.at(p.req.id));
    }
}

void World::finalize_reject(PaxRecord& p, double t, bool quiet) {
    p.state = PaxState::Rejected;
    p.rejected_time = t;
    --unfinished;
    if (!quiet) event(t, "reject_final", p.req.id, -1);
}

std::unique_ptr<Policy> make_policy(const SystemDesign& design) {
    if (design.fixed()) return std::make_unique<FixedPolicy>();
    if (design.flex()) return std::make_unique<FlexPolicy>();
    return std::make_unique<OnDemandPolicy>();
}

namespace engine_detail {

namespace {

// Adds displacement to the odometers, clipping the window share by time
// (speed is constant, so distance is proportional to elapsed time).
void add_movement(World& w, Vehicle& v, double t_from, double t_to, double dist) {
    v.odometer_km += dist;
    if (t_to <= t_from) return;
    double lo = std::max(t_from, w.warmup);
    double hi = std::min(t_to, w.horizon);
    if (hi > lo) v.window_km += dist * (hi - lo) / (t_to - t_from);
}

void depart(World& w, Vehicle& v, double t) {
    w.policy->on_departure(w, v, t);
    const Point from = v.plan.stops[v.plan.cursor].location;
    ++v.plan.cursor;
    if (v.plan.cursor >= v.plan.stops.size()) {
        v.phase = VehiclePhase::Parked;
        return;
    }
    const Point to = v.plan.stops[v.plan.cursor].location;
    v.last_leg_dist = w.dist(from, to);
    v.leg_start_time = t;
    v.section_backtrack += std::max(0.0, -v.dir_sign() * (to.x - from.x));
    v.phase = VehiclePhase::Moving;
}

void arrive(World& w, Vehicle& v, double t) {
    v.phase = VehiclePhase::AtStop;
    w.legs.push_back({v.id, v.leg_start_time, t, v.last_leg_dist});
    w.policy->process_arrival(w, v, t);
}

}  // namespace

void advance_vehicle(World& w, Vehicle& v, double t0, double t1) {
    double time = t0;
    if (v.phase == VehiclePhase::Parked) {
        if (!v.dispatched && v.dispatch_time < t1 - kTimeEps) {
            time = std::max(t0, v.dispatch_time);
            v.dispatched = true;
            w.policy->on_dispatch(w, v);
        } else {
            return;
        }
    }
    int guard = 0;
    while (v.phase != VehiclePhase::Parked) {
        if (++guard > 1000000)
            throw std::runtime_error("vehicle advance did not converge (engine bug)");
        if (v.phase == VehiclePhase::AtStop) {
            if (v.departure_time >= t1 - kTimeEps) return;
            time = std::max(time, v.departure_time);
            depart(w, v, time);
        } else {
            const RouteStop& target = v.plan.stops[v.plan.cursor];
            double d = w.dist(v.position, target.location);
            double tta = d / w.speed_kms();
            if (time + tta <= t1 + kTimeEps) {
                add_movement(w, v, time, time + tta, d);
                time += tta;
                v.position = target.location;
                arrive(w, v, time);
            } else {
                double step_d = w.speed_kms() * (t1 - time);
                add_movement(w, v, time, t1, step_d);
                v.position = path_position(v.position, target.location, step_d, w.scenario.metric);
                return;
            }
        }
    }
}

}  // namespace engine_detail

namespace {

const char* phase_name(VehiclePhase p) {
    switch (p) {
        case VehiclePhase::Parked: return "parked";
        case VehiclePhase::Moving: return "moving";
        case VehiclePhase::AtStop: return "dwelling";
    }
    return "?";
}

constexpr double kDrainCap = 8.0 * 3600.0;  // audit failure if the drain runs longer

}  // namespace

RunResult run_simulation(const ScenarioParams& scenario, const SystemDesign& design,
                         const std::vector<Passenger>& demand, const RunOptions& opts) {
    scenario.validate();
    design.validate();

    World w(scenario, design);
    w.record_events = opts.record_events;
    w.record_trace = opts.record_trace;
    const double dt = scenario.time_step;
    w.warmup = std::ceil(warmup_duration(design) / dt - kTimeEps) * dt;
    w.horizon = w.warmup + scenario.sim_length;

    w.pax.reserve(demand.size());
    std::set<std::int64_t> seen;
    for (const auto& d : demand) {
        if (!seen.insert(d.id).second)
            throw std::invalid_argument("duplicate passenger id " + std::to_string(d.id));
        if (d.arrival_s < 0.0 || d.arrival_s >= scenario.sim_length)
            throw std::invalid_argument("passenger " + std::to_string(d.id) +
                                        " arrives outside the demand window");
        if (!scenario.contains(d.origin) || !scenario.contains(d.destination))
            throw std::invalid_argument("passenger " + std::to_string(d.id) +
                                        " has coordinates outside the region");
        PaxRecord r;
        r.req = d;
        r.arrival_abs = w.warmup + d.arrival_s;
        r.direct_ride_s = w.dist(d.origin, d.destination) / w.speed_kms();
        w.pax.push_back(std::move(r));
    }
    std::stable_sort(w.pax.begin(), w.pax.end(), [](const PaxRecord& a, const PaxRecord& b) {
        if (a.arrival_abs != b.arrival_abs) return a.arrival_abs < b.arrival_abs;
        return a.req.id < b.req.id;
    });
    for (std::size_t i = 0; i < w.pax.size(); ++i) w.pax_by_id[w.pax[i].req.id] = i;
    w.unfinished = static_cast<long long>(w.pax.size());

    auto policy = make_policy(design);
    w.policy = policy.get();
    policy->init(w);

    std::size_t next_pax = 0;
    long long step = 0;
    while (true) {
        const double t0 = static_cast<double>(step) * dt;
        w.clock = t0;
        if (!w.draining && t0 >= w.horizon - kTimeEps) {
            w.draining = true;
            policy->on_drain_start(w);
        }
        if (w.draining && w.all_terminal()) break;
        if (t0 > w.horizon + kDrainCap)
            throw std::runtime_error("post-horizon drain did not terminate (engine audit)");

        while (next_pax < w.pax.size() && w.pax[next_pax].arrival_abs < t0 + dt - kTimeEps) {
            PaxRecord& p = w.pax[next_pax];
            w.event(p.arrival_abs, "request", p.req.id, -1);
            policy->on_request(w, next_pax);
            ++next_pax;
        }
        policy->on_step(w);

        for (auto& v : w.vehicles) engine_detail::advance_vehicle(w, v, t0, t0 + dt);

        const double t_end = t0 + dt;
        // Walker state transitions are bookkeeping; boarding math uses the
        // exact stored times.
        for (auto& p : w.pax) {
            if (p.state == PaxState::WalkingToStop && p.stop_arrival <= t_end + kTimeEps)
                p.state = PaxState::WaitingAtStop;
        }
        if (!w.egressing.empty()) {
            std::vector<std::size_t> rest;
            for (std::size_t idx : w.egressing) {
                PaxRecord& p = w.pax[idx];
                if (p.served_time <= t_end + kTimeEps) {
                    p.state = PaxState::Served;
                    --w.unfinished;
                    w.event(p.served_time, "served", p.req.id, p.vehicle);
                } else {
                    rest.push_back(idx);
                }
            }
            w.egressing = std::move(rest);
        }
        if (w.record_trace) {
            for (const auto& v : w.vehicles)
                w.trace.push_back({t_end, v.id, v.position, phase_name(v.phase),
                                   static_cast<int>(v.onboard.size())});
        }
        ++step;
    }

    // Flush in-flight legs so the leg log covers exactly what was driven.
    for (const auto& v : w.vehicles) {
        if (v.phase != VehiclePhase::Moving) continue;
        double covered = v.last_leg_dist -
                         w.dist(v.position, v.plan.stops[v.plan.cursor].location);
        if (covered > 0.0)
            w.legs.push_back({v.id, v.leg_start_time,
                              v.leg_start_time + covered / w.speed_kms(), covered});
    }

    RunResult res;
    res.design_id = design.id;
    res.scenario_id = scenario.id;
    res.seed = scenario.seed;
    res.warmup = w.warmup;
    res.sim_length = scenario.sim_length;
    res.fingerprint = demand_fingerprint(demand);
    res.pax = std::move(w.pax);
    res.vehicles = std::move(w.vehicles);
    res.events = std::move(w.events);
    res.trace = std::move(w.trace);
    res.legs = std::move(w.legs);
    res.audit = std::move(w.audit);
    return res;
}

}  // namespace transit
