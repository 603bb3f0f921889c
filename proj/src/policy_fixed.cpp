#include "transit/policy_fixed.hpp"

#include <algorithm>
#include <stdexcept>

namespace transit {

std::vector<Point> fixed_layout(const FixedDesign& d, const ScenarioParams& scenario) {
    std::vector<Point> pts;
    pts.reserve(d.S);
    const double y = scenario.W / 2.0;
    if (!d.stop_x.empty()) {
        for (double x : d.stop_x) pts.push_back({x, y});
        return pts;
    }
    for (int i = 0; i < d.S; ++i)
        pts.push_back({static_cast<double>(i) * scenario.L / (d.S - 1), y});
    return pts;
}

FixedAssignment assign_fixed(const Point& origin, const Point& destination,
                             const std::vector<Point>& layout, Metric metric) {
    auto nearest = [&](const Point& p, int exclude) {
        int best = -1;
        double best_d = 0.0;
        for (int i = 0; i < static_cast<int>(layout.size()); ++i) {
            if (i == exclude) continue;
            double d = distance(p, layout[i], metric);
            if (best < 0 || d < best_d) {
                best = i;
                best_d = d;
            }
        }
        return best;
    };
    FixedAssignment a;
    a.board = nearest(origin, -1);
    a.alight = nearest(destination, -1);
    if (a.alight == a.board) a.alight = nearest(destination, a.board);
    a.direction = layout[a.alight].x > layout[a.board].x ? Direction::Forward
                                                         : Direction::Backward;
    return a;
}

void FixedPolicy::init(World& w) {
    const FixedDesign& d = *w.design.fixed();
    layout_ = fixed_layout(d, w.scenario);
    const double h = 3600.0 / d.f;
    w.stop_queue[0].assign(layout_.size(), {});
    w.stop_queue[1].assign(layout_.size(), {});
    arrival_time_.assign(d.V, 0.0);
    for (int i = 0; i < d.V; ++i) {
        Vehicle v;
        v.id = i + 1;
        v.capacity = d.K;
        v.position = layout_.front();
        v.direction = Direction::Forward;
        v.dispatch_time = static_cast<double>(i) * h;
        w.vehicles.push_back(std::move(v));
    }
}

RoutePlan FixedPolicy::build_run(Direction dir) const {
    RoutePlan plan;
    const int n = static_cast<int>(layout_.size());
    for (int k = 0; k < n; ++k) {
        int idx = dir == Direction::Forward ? k : n - 1 - k;
        RouteStop s;
        s.location = layout_[idx];
        s.kind = StopKind::FixedStop;
        s.index = idx;
        plan.stops.push_back(std::move(s));
    }
    return plan;
}

void FixedPolicy::on_request(World& w, std::size_t pax_idx) {
    PaxRecord& p = w.pax[pax_idx];
    FixedAssignment a = assign_fixed(p.req.origin, p.req.destination, layout_, w.scenario.metric);
    p.mode = ServiceMode::FixedWalk;
    p.board_stop = a.board;
    p.alight_stop = a.alight;
    p.board_point = layout_[a.board];
    p.alight_point = layout_[a.alight];
    p.walk_depart = p.arrival_abs;
    p.stop_arrival =
        p.arrival_abs + walk_time_s(w.dist(p.req.origin, p.board_point), w.scenario.v_w);
    p.state = PaxState::WalkingToStop;
    int dir = a.direction == Direction::Forward ? 0 : 1;
    w.stop_queue[dir][a.board].push_back(pax_idx);
    w.event(p.arrival_abs, "assign_fixed", p.req.id, -1,
            "board=" + std::to_string(a.board) + ";alight=" + std::to_string(a.alight));
    w.event(p.stop_arrival, "at_stop", p.req.id, -1);
}

void FixedPolicy::on_dispatch(World& w, Vehicle& v) {
    v.plan = build_run(Direction::Forward);
    v.direction = Direction::Forward;
    v.position = layout_.front();
    v.phase = VehiclePhase::AtStop;
    v.run_index = 0;
    // First departure happens right at the dispatch instant; waiting walk-ins
    // board in the departure sweep.
    v.departure_time = v.dispatch_time;
    arrival_time_[v.id - 1] = v.dispatch_time;
    w.event(v.dispatch_time, "dispatch", -1, v.id);
}

void FixedPolicy::board_from_queue(World& w, Vehicle& v, int stop_index,
                                   double latest_stop_arrival, double board_floor) {
    int dir = v.direction == Direction::Forward ? 0 : 1;
    auto& q = w.stop_queue[dir][stop_index];
    std::vector<std::size_t> eligible;
    for (std::size_t idx : q)
        if (w.pax[idx].stop_arrival <= latest_stop_arrival + kTimeEps) eligible.push_back(idx);
    std::sort(eligible.begin(), eligible.end(), [&](std::size_t a, std::size_t b) {
        if (w.pax[a].stop_arrival != w.pax[b].stop_arrival)
            return w.pax[a].stop_arrival < w.pax[b].stop_arrival;
        return w.pax[a].req.id < w.pax[b].req.id;
    });
    for (std::size_t idx : eligible) {
        if (static_cast<int>(v.onboard.size()) >= v.capacity) break;
        PaxRecord& p = w.pax[idx];
        w.board_pax(p, v, std::max(p.stop_arrival, board_floor));
        q.erase(std::find(q.begin(), q.end(), idx));
    }
}

void FixedPolicy::process_arrival(World& w, Vehicle& v, double t) {
    const FixedDesign& d = *w.design.fixed();
    RouteStop& stop = v.plan.stops[v.plan.cursor];
    arrival_time_[v.id - 1] = t;

    std::vector<std::int64_t> alighting;
    for (std::int64_t id : v.onboard)
        if (w.rec(id).alight_stop == stop.index) alighting.push_back(id);
    for (std::int64_t id : alighting) w.alight_pax(w.rec(id), v, t);

    if (v.plan.cursor + 1 == v.plan.stops.size()) {
        // Terminal: reverse and start the next run from this stop.
        v.direction = v.direction == Direction::Forward ? Direction::Backward
                                                        : Direction::Forward;
        v.plan = build_run(v.direction);
        v.plan.cursor = 0;
        ++v.run_index;
        w.event(t, "turnaround", -1, v.id);
    }

    board_from_queue(w, v, stop.index, t, t);
    v.departure_time = t + d.t_d;
}

void FixedPolicy::on_departure(World& w, Vehicle& v, double t) {
    const RouteStop& stop = v.plan.stops[v.plan.cursor];
    board_from_queue(w, v, stop.index, t, arrival_time_[v.id - 1]);
}

}  // namespace transit
