#include "transit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace transit {

namespace {

std::string fmt(double v, const char* spec = "%.6f") {
    char buf[48];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

}  // namespace

double weighted_travel_time_min(const PassengerOutcome& o, double gamma_v, double gamma_w,
                                double gamma_a) {
    return (gamma_v * o.t_invehicle_s + gamma_w * o.t_wait_s +
            gamma_a * (o.t_access_s + o.t_egress_s)) /
           60.0;
}

RunReport aggregate(const RunResult& run, const ScenarioParams& scenario,
                    const SystemDesign& design) {
    (void)design;
    RunReport rep;
    rep.design_id = run.design_id;
    rep.scenario_id = run.scenario_id;
    rep.seed = run.seed;
    rep.fingerprint = run.fingerprint;

    std::vector<std::string> audit = run.audit.violations;

    long long served = 0, rejected = 0;
    double wtt_sum = 0.0;
    for (const auto& p : run.pax) {
        PassengerOutcome o;
        o.id = p.req.id;
        if (p.state == PaxState::Served) {
            o.served = true;
            if (p.mode == ServiceMode::FixedWalk || p.mode == ServiceMode::FlexWalk) {
                o.t_access_s = p.stop_arrival - p.walk_depart;
                o.t_egress_s = p.served_time - p.alight_time;
            }
            o.t_wait_s = p.board_time - p.arrival_abs - o.t_access_s;
            o.t_invehicle_s = p.alight_time - p.board_time;
            if (o.t_access_s < -kTimeEps || o.t_wait_s < -kTimeEps ||
                o.t_invehicle_s < -kTimeEps || o.t_egress_s < -kTimeEps)
                audit.push_back("negative duration in ledger of pax " +
                                std::to_string(p.req.id));
            o.weighted_min = weighted_travel_time_min(o, scenario.gamma_v, scenario.gamma_w,
                                                      scenario.gamma_a);
            wtt_sum += o.weighted_min;
            ++served;
        } else if (p.state == PaxState::Rejected) {
            ++rejected;
        } else {
            audit.push_back("pax " + std::to_string(p.req.id) +
                            " not in a terminal state after the drain");
        }
        rep.per_passenger.push_back(o);
    }
    rep.total_ridership = served;
    rep.rejected = rejected;
    if (served + rejected != static_cast<long long>(run.pax.size()))
        audit.push_back("conservation identity broken: served + rejected != generated");
    if (served > 0) rep.avg_weighted_travel_time_min = wtt_sum / served;

    double vmt_km = 0.0;
    for (const auto& v : run.vehicles) {
        vmt_km += v.window_km;
        rep.per_vehicle_vmt_mi.push_back(mi_from_km(v.window_km));
    }
    rep.total_vmt_km = vmt_km;
    rep.total_vmt_mi = mi_from_km(vmt_km);

    // Double entry 1: VMT from executed legs, clipped to the window by time
    // (constant speed), must match the per-step odometer.
    const double w0 = run.warmup;
    const double w1 = run.warmup + run.sim_length;
    double legs_km = 0.0;
    for (const auto& leg : run.legs) {
        if (leg.t1 <= leg.t0) continue;
        double lo = std::max(leg.t0, w0);
        double hi = std::min(leg.t1, w1);
        if (hi > lo) legs_km += leg.dist_km * (hi - lo) / (leg.t1 - leg.t0);
    }
    const double step_km = scenario.v_o / 3600.0 * scenario.time_step;
    if (std::abs(legs_km - vmt_km) > step_km + 1e-6)
        audit.push_back("VMT double entry disagrees: steps " + fmt(vmt_km) + " km vs legs " +
                        fmt(legs_km) + " km");

    // Double entry 2: the average weighted travel time recomputed from the
    // raw event log.
    if (!run.events.empty()) {
        struct Times {
            double request = -1, assign = -1, at_stop = -1, board = -1, alight = -1,
                   served = -1;
        };
        std::map<std::int64_t, Times> tl;
        for (const auto& e : run.events) {
            if (e.pax < 0) continue;
            Times& t = tl[e.pax];
            if (e.type == "request") t.request = e.t;
            else if (e.type == "assign_fixed" || e.type == "assign_flex") t.assign = e.t;
            else if (e.type == "at_stop") t.at_stop = e.t;
            else if (e.type == "board") t.board = e.t;
            else if (e.type == "alight") t.alight = e.t;
            else if (e.type == "served") t.served = e.t;
        }
        double sum2 = 0.0;
        long long n2 = 0;
        for (const auto& [id, t] : tl) {
            if (t.served < 0) continue;
            double access = t.at_stop >= 0 ? t.at_stop - t.assign : 0.0;
            double wait = t.board - t.request - access;
            double inveh = t.alight - t.board;
            double egress = t.served - t.alight;
            sum2 += (scenario.gamma_v * inveh + scenario.gamma_w * wait +
                     scenario.gamma_a * (access + egress)) /
                    60.0;
            ++n2;
        }
        if (n2 != served) {
            audit.push_back("event log served count disagrees with ledger");
        } else if (served > 0 &&
                   std::abs(sum2 / n2 - *rep.avg_weighted_travel_time_min) > 1e-6) {
            audit.push_back("weighted travel time double entry disagrees: ledger " +
                            fmt(*rep.avg_weighted_travel_time_min) + " vs events " +
                            fmt(sum2 / n2));
        }
    }

    if (!audit.empty()) {
        std::string msg = "run audit failed:";
        for (const auto& m : audit) msg += "\n  - " + m;
        throw std::runtime_error(msg);
    }
    return rep;
}

std::string report_csv_header() {
    return "design_id,scenario_id,seed,ridership,rejected,avg_wtt_min,vmt_mi\n";
}

std::string report_csv_row(const RunReport& r) {
    std::string s = r.design_id + "," + r.scenario_id + "," + std::to_string(r.seed) + "," +
                    std::to_string(r.total_ridership) + "," + std::to_string(r.rejected) + ",";
    if (r.avg_weighted_travel_time_min) s += fmt(*r.avg_weighted_travel_time_min, "%.4f");
    s += "," + fmt(r.total_vmt_mi, "%.4f") + "\n";
    return s;
}

std::string per_passenger_csv(const RunReport& r) {
    std::string s = "id,served,t_access_s,t_wait_s,t_invehicle_s,t_egress_s,weighted_min\n";
    for (const auto& o : r.per_passenger) {
        s += std::to_string(o.id) + "," + (o.served ? "1" : "0") + "," +
             fmt(o.t_access_s, "%.3f") + "," + fmt(o.t_wait_s, "%.3f") + "," +
             fmt(o.t_invehicle_s, "%.3f") + "," + fmt(o.t_egress_s, "%.3f") + "," +
             fmt(o.weighted_min, "%.4f") + "\n";
    }
    return s;
}

std::string events_csv(const std::vector<Event>& events) {
    std::vector<const Event*> sorted;
    sorted.reserve(events.size());
    for (const auto& e : events) sorted.push_back(&e);
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const Event* a, const Event* b) { return a->t < b->t; });
    std::string s = "t_s,event,passenger_id,vehicle_id,detail\n";
    for (const Event* e : sorted) {
        s += fmt(e->t, "%.3f") + "," + e->type + ",";
        if (e->pax >= 0) s += std::to_string(e->pax);
        s += ",";
        if (e->veh >= 0) s += std::to_string(e->veh);
        s += "," + e->detail + "\n";
    }
    return s;
}

std::string trace_csv(const std::vector<TraceRow>& rows) {
    std::string s = "t_s,vehicle_id,x_km,y_km,state,onboard_count\n";
    for (const auto& r : rows) {
        s += fmt(r.t, "%.1f") + "," + std::to_string(r.veh) + "," + fmt(r.pos.x, "%.6f") +
             "," + fmt(r.pos.y, "%.6f") + "," + r.state + "," + std::to_string(r.onboard) +
             "\n";
    }
    return s;
}

std::string compare_csv(const std::vector<RunReport>& reports) {
    if (reports.size() < 2) throw std::invalid_argument("compare needs at least two reports");
    const RunReport& base = reports.front();
    for (const auto& r : reports)
        if (r.fingerprint != base.fingerprint)
            throw std::invalid_argument(
                "compare: demand fingerprints differ (" + base.fingerprint + " vs " +
                r.fingerprint + "); runs must share the passenger dataset");

    std::string s =
        "design_id,scenario_id,seed,ridership,ridership_ratio,avg_wtt_min,avg_wtt_ratio,"
        "vmt_mi,vmt_ratio\n";
    for (const auto& r : reports) {
        s += r.design_id + "," + r.scenario_id + "," + std::to_string(r.seed) + ",";
        s += std::to_string(r.total_ridership) + ",";
        s += base.total_ridership > 0
                 ? fmt(static_cast<double>(r.total_ridership) / base.total_ridership, "%.4f")
                 : "";
        s += ",";
        if (r.avg_weighted_travel_time_min) s += fmt(*r.avg_weighted_travel_time_min, "%.4f");
        s += ",";
        if (r.avg_weighted_travel_time_min && base.avg_weighted_travel_time_min)
            s += fmt(*r.avg_weighted_travel_time_min / *base.avg_weighted_travel_time_min,
                     "%.4f");
        s += ",";
        s += fmt(r.total_vmt_mi, "%.4f") + ",";
        s += base.total_vmt_mi > 0 ? fmt(r.total_vmt_mi / base.total_vmt_mi, "%.4f") : "";
        s += "\n";
    }
    return s;
}

}  // namespace transit
