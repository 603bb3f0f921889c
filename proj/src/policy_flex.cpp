#include "transit/policy_flex.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

#include "tail_patch.hpp"

namespace transit {

namespace {

std::string fmt_eq(const FlexConfig& c) {
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "t_slack = t_c/(S_c-1) - t_t - t_d = %.3f/%d - %.3f - %.3f = %.3f s",
                  c.t_c, c.S_c - 1, c.t_t, c.t_d, c.slack);
    return buf;
}

// Midpoint of a leg along the driven path. On baseline legs this is the
// section midpoint, so each segment offers its start, mid and end points as
// walking targets.
Point leg_mid(const Point& a, const Point& b, Metric m) {
    return path_position(a, b, distance(a, b, m) / 2.0, m);
}

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

void FlexPolicy::init(World& w) {
    const FlexDesign& d = *w.design.flex();
    cfg_.S_c = d.S_c;
    cfg_.t_d = d.t_d;
    cfg_.t_c = d.t_c;
    cfg_.zeta_w = d.zeta_w;
    cfg_.zeta_b = d.zeta_b;
    cfg_.seg_budget = d.t_c / (d.S_c - 1);
    cfg_.t_t = flex_segment_travel_time(d, w.scenario.L, w.scenario.v_o);
    cfg_.slack = cfg_.seg_budget - cfg_.t_t - cfg_.t_d;
    cfg_.walking_enabled = d.walking_enabled;
    if (cfg_.slack < -kTimeEps)
        throw std::invalid_argument("flex design has negative slack time: " + fmt_eq(cfg_));

    checkpoints_.clear();
    const double y = w.scenario.W / 2.0;
    for (int i = 0; i < d.S_c; ++i)
        checkpoints_.push_back({static_cast<double>(i) * w.scenario.L / (d.S_c - 1), y});

    const double h = 3600.0 / d.f;
    for (int i = 0; i < d.V; ++i) {
        Vehicle v;
        v.id = i + 1;
        v.capacity = d.K;
        v.position = checkpoints_.front();
        v.dispatch_time = static_cast<double>(i) * h;
        w.vehicles.push_back(std::move(v));
    }
}

RoutePlan FlexPolicy::build_run(Direction dir) const {
    RoutePlan plan;
    for (int c = 0; c < cfg_.S_c; ++c) {
        RouteStop s;
        s.kind = StopKind::Checkpoint;
        s.index = c;  // ordinal within the run
        s.location = dir == Direction::Forward ? checkpoints_[c]
                                               : checkpoints_[cfg_.S_c - 1 - c];
        plan.stops.push_back(std::move(s));
    }
    return plan;
}

void FlexPolicy::on_dispatch(World& w, Vehicle& v) {
    v.run_start = v.dispatch_time;
    v.run_index = 0;
    v.direction = Direction::Forward;
    v.plan = build_run(v.direction);
    v.position = checkpoints_.front();
    v.phase = VehiclePhase::AtStop;
    v.departure_time = v.run_start;  // timetable departure of checkpoint 0
    v.section = 0;
    v.section_backtrack = 0.0;
    v.visited_checkpoints = {0};
    w.event(v.dispatch_time, "dispatch", -1, v.id);
}

// Expected stop times and feasibility of one candidate remaining plan. The
// screens: per-segment slack via the checkpoint timetable, walkers reaching
// checkpoints before the scheduled departure, per-section backtracking,
// capacity, and every passenger picked up within zeta_w of their request.
FlexPolicy::Eval FlexPolicy::evaluate_patch(const World& w, const Vehicle& v,
                                            const TailPatch& patch,
                                            const CandPax* cand) const {
    Eval ev;
    const double now = w.clock;
    const double vkms = w.speed_kms();
    const std::size_t n = patch.size();
    if (n == 0) return ev;
    const bool at_stop = v.phase == VehiclePhase::AtStop;

    auto walker_arrival = [&](std::int64_t id) -> double {
        if (cand && id == cand->id) return cand->walker_arrival;
        return w.rec(id).stop_arrival;
    };
    auto request_time = [&](std::int64_t id) -> double {
        if (cand && id == cand->id) return cand->arrival_abs;
        return w.rec(id).arrival_abs;
    };

    ScratchBufs& sb = scratch();
    sb.arr.assign(n, 0.0);
    sb.boards.clear();
    sb.alights.clear();

    bool after_terminal;
    {
        const RouteStop& s0 = patch.at(0);
        after_terminal = s0.kind == StopKind::Checkpoint && s0.index == cfg_.S_c - 1;
    }
    double t = 0.0;
    Point prev;
    int load = static_cast<int>(v.onboard.size());
    double backtrack = v.section_backtrack;
    const int sign = v.dir_sign();

    for (std::size_t i = 0; i < n; ++i) {
        const RouteStop& s = patch.at(i);
        if (i == 0 && at_stop) {
            // The stop being served: departure committed, screens already met.
            sb.arr[0] = now;
            prev = s.location;
            t = v.departure_time;
            continue;
        }
        const bool cand_pick = patch.cand_picks_at(i);
        const bool cand_drop = patch.cand_drops_at(i);
        double leg;
        double arr;
        if (i == 0) {
            leg = w.dist(v.position, s.location);
            arr = now + leg / vkms;
        } else {
            if (after_terminal) return ev;  // nothing may trail the final checkpoint
            leg = w.dist(prev, s.location);
            arr = t + leg / vkms;
            backtrack += std::max(0.0, -sign * (s.location.x - prev.x));
            if (backtrack > cfg_.zeta_b + kDistEps) return ev;
        }
        double dep;
        if (s.kind == StopKind::Checkpoint) {
            double tt = timetable_dep(v, s.index);
            if (arr + cfg_.t_d > tt + kTimeEps) return ev;  // segment slack exhausted
            for (std::int64_t id : s.pickups)
                if (walker_arrival(id) > tt + kTimeEps) return ev;  // cannot hold a checkpoint
            if (cand_pick && walker_arrival(cand->id) > tt + kTimeEps) return ev;
            dep = std::max(arr + cfg_.t_d, tt);
            backtrack = 0.0;
            if (s.index == cfg_.S_c - 1) after_terminal = true;
        } else {
            // The passenger waits for the vehicle, never the reverse: a
            // walker who cannot beat the vehicle to the meeting point makes
            // the candidate infeasible.
            for (std::int64_t id : s.pickups)
                if (walker_arrival(id) > arr + kTimeEps) return ev;
            if (cand_pick && walker_arrival(cand->id) > arr + kTimeEps) return ev;
            dep = arr + (leg <= kDistEps ? 0.0 : cfg_.t_d);
        }
        sb.arr[i] = arr;
        prev = s.location;
        t = dep;

        load -= static_cast<int>(s.dropoffs.size()) + (cand_drop ? 1 : 0);
        load += static_cast<int>(s.pickups.size()) + (cand_pick ? 1 : 0);
        if (load > v.capacity) return ev;

        for (std::int64_t id : s.pickups) sb.boards.push_back({id, i});
        for (std::int64_t id : s.dropoffs) sb.alights.push_back({id, i});
        if (cand_pick) sb.boards.push_back({cand->id, i});
        if (cand_drop) sb.alights.push_back({cand->id, i});
    }
    ev.completion = t;

    double sum = 0.0;
    for (const auto& [id, ai] : sb.alights) {
        double board_t;
        double wait = 0.0;
        auto bit = std::find_if(sb.boards.begin(), sb.boards.end(),
                                [id = id](const auto& pr) { return pr.first == id; });
        const bool is_cand = cand && id == cand->id;
        if (bit != sb.boards.end()) {
            double wa = walker_arrival(id);
            board_t = std::max(sb.arr[bit->second], wa);
            // Walk-in boardings wait at the stop; door pickups wait from the
            // request.
            wait = wa > request_time(id) ? std::max(0.0, sb.arr[bit->second] - wa)
                                         : board_t - request_time(id);
            if (wait > cfg_.zeta_w + (is_cand ? 0.0 : kTimeEps)) return ev;
            if (is_cand) ev.cand_board = board_t;
        } else {
            board_t = w.rec(id).board_time;  // already onboard
        }
        double ride = sb.arr[ai] - board_t;
        sum += w.scenario.gamma_w * wait + w.scenario.gamma_v * ride;
        if (is_cand) ev.cand_alight = sb.arr[ai];
    }
    ev.user_time = sum;
    ev.feasible = true;
    return ev;
}

FlexCandidate FlexPolicy::best_direct_insertion(World& w, const Vehicle& v,
                                                const PaxRecord& p) const {
    FlexCandidate best;
    const std::size_t n = v.plan.remaining();
    long enumerated = 0;
    if (n == 0) return best;
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
    CandPax cand{p.req.id, p.arrival_abs, p.arrival_abs};

    TailPatch patch;
    patch.base = &rem;
    patch.ins0 = &so;
    patch.ins1 = &sd;
    patch.cand = p.req.id;
    for (std::size_t k1 = 1; k1 <= n; ++k1) {
        for (std::size_t k2 = k1; k2 <= n; ++k2) {
            ++enumerated;
            ++w.audit.insertion_candidates;
            patch.ins0_pos = k1;
            patch.ins1_pos = k2 + 1;
            Eval e = evaluate_patch(w, v, patch, &cand);
            if (!e.feasible) continue;
            double impact = e.user_time - base.user_time;
            if (!best.feasible || impact < best.impact) {
                best.feasible = true;
                best.impact = impact;
                best.k1 = static_cast<int>(k1);
                best.k2 = static_cast<int>(k2);
                best.mode = ServiceMode::FlexDirect;
                best.tail = patch.materialize();
                best.board_point = p.req.origin;
                best.alight_point = p.req.destination;
                best.stop_arrival = p.arrival_abs;
                best.expected_board = e.cand_board;
                best.expected_alight = e.cand_alight;
            }
        }
    }
    best.enumerated = enumerated;
    return best;
}

namespace {

struct MeetPoint {
    bool attach = false;
    std::size_t pos = 0;  // attach: tail index; in-gap: gap index (between pos and pos+1)
    Point pt;
    double walk_km = 0.0;
};

}  // namespace

// Meeting options for one trip end: existing stops within walking range
// (checkpoints always, temporary stops in extended mode) plus each leg's
// midpoint in extended mode, so every segment offers start, mid and end
// points to approach.
FlexCandidate FlexPolicy::best_walking_insertion(World& w, const Vehicle& v,
                                                 const PaxRecord& p) const {
    FlexCandidate best;
    const std::size_t n = v.plan.remaining();
    if (n == 0) return best;
    std::vector<RouteStop> rem(v.plan.stops.begin() + v.plan.cursor, v.plan.stops.end());
    TailPatch base_patch;
    base_patch.base = &rem;
    Eval base = evaluate_patch(w, v, base_patch, nullptr);
    if (!base.feasible) return best;

    auto collect = [&](const Point& from) {
        std::vector<MeetPoint> ms;
        for (std::size_t i = 1; i < n; ++i) {
            if (rem[i].kind != StopKind::Checkpoint && !cfg_.walking_enabled) continue;
            double d = w.dist(from, rem[i].location);
            if (d <= w.scenario.zeta_a + kDistEps)
                ms.push_back({true, i, rem[i].location, d});
        }
        for (std::size_t g = 0; g + 1 < n; ++g) {
            const Point& a = rem[g].location;
            const Point& b = rem[g + 1].location;
            if (cfg_.walking_enabled) {
                Point f = leg_mid(a, b, w.scenario.metric);
                if (euclid_distance(f, a) > kDistEps && euclid_distance(f, b) > kDistEps) {
                    double d = w.dist(from, f);
                    if (d <= w.scenario.zeta_a + kDistEps) ms.push_back({false, g, f, d});
                }
            }
        }
        return ms;
    };
    std::vector<MeetPoint> origin_pts = collect(p.req.origin);
    if (origin_pts.empty()) return best;
    std::vector<MeetPoint> dest_pts = collect(p.req.destination);
    if (dest_pts.empty()) return best;

    long enumerated = 0;
    RouteStop so;
    so.pickups = {p.req.id};
    RouteStop sd;
    sd.dropoffs = {p.req.id};
    for (const MeetPoint& mo : origin_pts) {
        for (const MeetPoint& md : dest_pts) {
            // The alighting point must follow the boarding point in the plan.
            bool ok;
            if (mo.attach && md.attach) ok = md.pos > mo.pos;
            else if (mo.attach) ok = md.pos >= mo.pos;       // in gap md.pos
            else if (md.attach) ok = md.pos >= mo.pos + 1;   // stop after gap mo.pos
            else ok = md.pos >= mo.pos;                      // same gap: O precedes D
            if (!ok || (mo.pt == md.pt)) continue;
            ++enumerated;
            ++w.audit.insertion_candidates;

            TailPatch patch;
            patch.base = &rem;
            patch.cand = p.req.id;
            if (mo.attach) {
                patch.attach_pick = mo.pos;
            } else {
                so.location = mo.pt;
                patch.ins0 = &so;
                patch.ins0_pos = mo.pos + 1;
            }
            if (md.attach) {
                patch.attach_drop = md.pos;
            } else {
                sd.location = md.pt;
                if (patch.ins0) {
                    patch.ins1 = &sd;
                    patch.ins1_pos = md.pos + 2;  // shifted past the O insertion
                } else {
                    patch.ins0 = &sd;
                    patch.ins0_pos = md.pos + 1;
                }
            }

            double access_s = walk_time_s(mo.walk_km, w.scenario.v_w);
            double egress_s = walk_time_s(md.walk_km, w.scenario.v_w);
            CandPax cand{p.req.id, w.clock + access_s, p.arrival_abs};
            Eval e = evaluate_patch(w, v, patch, &cand);
            if (!e.feasible) continue;
            double impact = e.user_time - base.user_time +
                            w.scenario.gamma_a * (access_s + egress_s);
            if (!best.feasible || impact < best.impact) {
                best.feasible = true;
                best.impact = impact;
                best.k1 = static_cast<int>(2 * mo.pos + (mo.attach ? 0 : 1));
                best.k2 = static_cast<int>(2 * md.pos + (md.attach ? 0 : 1));
                best.mode = ServiceMode::FlexWalk;
                best.tail = patch.materialize();
                best.board_point = mo.pt;
                best.alight_point = md.pt;
                best.stop_arrival = cand.walker_arrival;
                best.expected_board = e.cand_board;
                best.expected_alight = e.cand_alight;
            }
        }
    }
    best.enumerated = enumerated;
    return best;
}

bool FlexPolicy::try_assign(World& w, std::size_t pax_idx) {
    PaxRecord& p = w.pax[pax_idx];
    const bool forward = p.req.destination.x >= p.req.origin.x;

    FlexCandidate best;
    int best_veh = -1;
    for (auto& v : w.vehicles) {
        if (!v.dispatched || v.phase == VehiclePhase::Parked) continue;
        if ((v.direction == Direction::Forward) != forward) continue;
        FlexCandidate cd = best_direct_insertion(w, v, p);
        if (cd.feasible && (best_veh < 0 || cd.impact < best.impact)) {
            best = std::move(cd);
            best_veh = v.id;
        }
        FlexCandidate cw = best_walking_insertion(w, v, p);
        if (cw.feasible && (best_veh < 0 || cw.impact < best.impact)) {
            best = std::move(cw);
            best_veh = v.id;
        }
    }
    if (best_veh < 0) return false;

    Vehicle& v = w.vehicles[static_cast<std::size_t>(best_veh - 1)];
    v.plan.stops.resize(v.plan.cursor);
    for (auto& s : best.tail) v.plan.stops.push_back(std::move(s));

    p.vehicle = best_veh;
    p.mode = best.mode;
    p.board_point = best.board_point;
    p.alight_point = best.alight_point;
    if (best.mode == ServiceMode::FlexWalk) {
        p.walk_depart = w.clock;
        p.stop_arrival = best.stop_arrival;
        p.state = PaxState::WalkingToStop;
        w.event(p.stop_arrival, "at_stop", p.req.id, best_veh);
    } else {
        p.stop_arrival = p.arrival_abs;
        p.state = PaxState::WaitingAtStop;
    }
    w.event(w.clock, "assign_flex", p.req.id, best_veh,
            "k1=" + std::to_string(best.k1) + ";k2=" + std::to_string(best.k2) +
                ";mode=" + (best.mode == ServiceMode::FlexWalk ? "walk" : "direct"));
    return true;
}

void FlexPolicy::on_request(World& w, std::size_t pax_idx) {
    if (try_assign(w, pax_idx)) return;
    PaxRecord& p = w.pax[pax_idx];
    p.pooled_since = w.clock;
    p.last_attempt = w.clock;
    w.flex_pool.push_back(pax_idx);
    w.event(w.clock, "pool_flex", p.req.id, -1);
}

void FlexPolicy::on_step(World& w) {
    if (w.flex_pool.empty()) return;
    std::vector<std::size_t> keep;
    keep.reserve(w.flex_pool.size());
    for (std::size_t idx : w.flex_pool) {
        PaxRecord& p = w.pax[idx];
        if (w.clock - p.arrival_abs >= cfg_.zeta_w - kTimeEps) {
            w.finalize_reject(p, w.clock);
            continue;
        }
        if (w.clock - p.last_attempt >= kResurrectionPeriod - kTimeEps) {
            if (try_assign(w, idx)) continue;
            p.last_attempt = w.clock;
        }
        keep.push_back(idx);
    }
    w.flex_pool = std::move(keep);
}

void FlexPolicy::on_drain_start(World& w) {
    for (std::size_t idx : w.flex_pool) w.finalize_reject(w.pax[idx], w.clock);
    w.flex_pool.clear();
}

void FlexPolicy::process_arrival(World& w, Vehicle& v, double t) {
    const RouteStop stop = v.plan.stops[v.plan.cursor];  // copy: plan may roll over

    if (stop.kind == StopKind::Checkpoint) {
        v.visited_checkpoints.push_back(stop.index);
        w.audit.max_backtrack_km = std::max(w.audit.max_backtrack_km, v.section_backtrack);
        if (v.section_backtrack > cfg_.zeta_b + 1e-6)
            w.audit.violation("backtracking over zeta_b on vehicle " + std::to_string(v.id));
        v.section = stop.index;
        v.section_backtrack = 0.0;
        double tt = timetable_dep(v, stop.index);
        double over = t + cfg_.t_d - tt;
        if (over > kTimeEps) {
            w.audit.max_slack_overrun_s = std::max(w.audit.max_slack_overrun_s, over);
            if (over > 1e-3)
                w.audit.violation("slack overrun at checkpoint on vehicle " +
                                  std::to_string(v.id));
        }
    }

    for (std::int64_t id : stop.dropoffs) w.alight_pax(w.rec(id), v, t);

    const bool terminal = v.plan.cursor + 1 == v.plan.stops.size();
    if (terminal) {
        bool ordered = static_cast<int>(v.visited_checkpoints.size()) == cfg_.S_c;
        for (int c = 0; ordered && c < cfg_.S_c; ++c)
            ordered = v.visited_checkpoints[c] == c;
        if (!ordered)
            w.audit.violation("checkpoint order broken on vehicle " + std::to_string(v.id));
        v.direction = v.direction == Direction::Forward ? Direction::Backward
                                                        : Direction::Forward;
        ++v.run_index;
        v.run_start += cfg_.t_c;
        v.plan = build_run(v.direction);
        v.visited_checkpoints = {0};
        v.section = 0;
        v.section_backtrack = 0.0;
        v.departure_time = std::max(t + cfg_.t_d, v.run_start);
        w.event(t, "turnaround", -1, v.id);
        return;
    }

    for (std::int64_t id : stop.pickups) {
        PaxRecord& p = w.rec(id);
        double board_time = std::max(t, p.stop_arrival);
        w.board_pax(p, v, board_time);
        double wait = p.mode == ServiceMode::FlexWalk
                          ? std::max(0.0, t - p.stop_arrival)
                          : board_time - p.arrival_abs;
        w.audit.max_wait_over_s = std::max(w.audit.max_wait_over_s, wait - cfg_.zeta_w);
    }

    if (stop.kind == StopKind::Checkpoint) {
        v.departure_time = std::max(t + cfg_.t_d, timetable_dep(v, stop.index));
    } else {
        v.departure_time = t + (v.last_leg_dist <= kDistEps ? 0.0 : cfg_.t_d);
    }
}

}  // namespace transit
