#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "transit/design.hpp"
#include "transit/demand.hpp"
#include "transit/passenger.hpp"
#include "transit/plan.hpp"
#include "transit/scenario.hpp"

namespace transit {

enum class VehiclePhase { Parked, Moving, AtStop };
enum class Direction { Forward, Backward };

inline constexpr double kTimeEps = 1e-6;   // s, audit tolerance for fp noise
inline constexpr double kDistEps = 1e-9;   // km

struct Vehicle {
    int id = 0;
    int capacity = 0;
    Point position;
    Direction direction = Direction::Forward;
    VehiclePhase phase = VehiclePhase::Parked;
    bool dispatched = false;
    double dispatch_time = 0.0;
    double departure_time = 0.0;  // valid while AtStop
    double last_leg_dist = 0.0;   // km driven into the current stop
    RoutePlan plan;
    std::vector<std::int64_t> onboard;

    // Flex timetable state: departure from checkpoint c of the current run is
    // scheduled at run_start + c * (t_c / (S_c - 1)).
    double run_start = 0.0;
    int run_index = -1;
    int section = 0;                  // last checkpoint ordinal arrived at
    double section_backtrack = 0.0;   // km driven against the run direction
    std::vector<int> visited_checkpoints;  // ordinals, current run

    double odometer_km = 0.0;     // whole-run displacement
    double window_km = 0.0;       // displacement inside the measurement window
    double leg_start_time = 0.0;  // departure time of the leg in flight

    int dir_sign() const { return direction == Direction::Forward ? 1 : -1; }
};

// Executed leg, for the plan-based VMT double entry.
struct LegRecord {
    int veh = 0;
    double t0 = 0.0;
    double t1 = 0.0;
    double dist_km = 0.0;
};

// How a passenger is connected to the service; drives the timing ledger.
enum class ServiceMode { None, FixedWalk, FlexDirect, FlexWalk, DoorToDoor };

struct PaxRecord {
    Passenger req;
    double arrival_abs = 0.0;  // request time on the engine clock
    PaxState state = PaxState::Unassigned;
    ServiceMode mode = ServiceMode::None;
    int vehicle = -1;

    Point board_point;
    Point alight_point;
    int board_stop = -1;   // fixed-route stop indices
    int alight_stop = -1;

    double walk_depart = 0.0;    // access walk start
    double stop_arrival = 0.0;   // expected/actual arrival at the boarding point
    double board_time = 0.0;
    double alight_time = 0.0;
    double served_time = 0.0;
    double direct_ride_s = 0.0;  // rect(O,D)/v_o, the zeta_d reference

    double pooled_since = -1.0;  // flex rejected-pool bookkeeping
    double last_attempt = -1.0;
    double rejected_time = -1.0;
};

struct Event {
    double t = 0.0;
    std::string type;
    std::int64_t pax = -1;
    int veh = -1;
    std::string detail;
};

struct TraceRow {
    double t = 0.0;
    int veh = 0;
    Point pos;
    const char* state = "";
    int onboard = 0;
};

// Post-run consistency data. Violations accumulate human-readable strings;
// aggregate() refuses to produce a report when any are present.
struct Audit {
    int max_load = 0;
    double max_slack_overrun_s = 0.0;
    double max_early_departure_s = 0.0;
    double max_backtrack_km = 0.0;
    double max_wait_over_s = 0.0;   // positive part of (wait - zeta_w)
    double max_ride_over_s = 0.0;   // positive part of (ride - zeta_d * direct)
    long long insertion_candidates = 0;  // instrumented enumeration count
    std::vector<std::string> violations;

    void violation(const std::string& msg) { violations.push_back(msg); }
};

class Policy;

struct World {
    const ScenarioParams& scenario;
    const SystemDesign& design;
    Policy* policy = nullptr;

    double warmup = 0.0;
    double horizon = 0.0;  // warmup + sim_length
    double clock = 0.0;
    bool draining = false;

    std::vector<Vehicle> vehicles;
    std::vector<PaxRecord> pax;
    std::unordered_map<std::int64_t, std::size_t> pax_by_id;
    std::vector<std::size_t> flex_pool;
    // Fixed-route waiting queues: [direction][stop index] -> pax indices.
    std::vector<std::vector<std::size_t>> stop_queue[2];
    std::vector<std::size_t> egressing;

    std::vector<Event> events;
    std::vector<TraceRow> trace;
    std::vector<LegRecord> legs;
    bool record_events = true;
    bool record_trace = false;
    Audit audit;
    long long unfinished = 0;

    World(const ScenarioParams& sc, const SystemDesign& d) : scenario(sc), design(d) {}

    double speed_kms() const { return scenario.v_o / 3600.0; }
    double dist(const Point& a, const Point& b) const { return scenario.dist(a, b); }

    PaxRecord& rec(std::int64_t id) { return pax[pax_by_id.at(id)]; }
    const PaxRecord& rec(std::int64_t id) const { return pax[pax_by_id.at(id)]; }

    void event(double t, const char* type, std::int64_t pax_id, int veh, std::string detail = "");

    // Lifecycle helpers keep the conservation counter in sync.
    void board_pax(PaxRecord& p, Vehicle& v, double board_time);
    void alight_pax(PaxRecord& p, Vehicle& v, double t);
    void finalize_reject(PaxRecord& p, double t, bool quiet = false);

    bool all_terminal() const { return unfinished == 0; }
};

// Operating policy plugged into the engine loop.
class Policy {
public:
    virtual ~Policy() = default;
    virtual void init(World& w) = 0;
    virtual void on_request(World& w, std::size_t pax_idx) = 0;
    virtual void on_step(World& w) { (void)w; }
    virtual void on_drain_start(World& w) { (void)w; }

    // Builds the first plan when dispatch_time is reached; the vehicle is left
    // AtStop on its first stop with departure_time set.
    virtual void on_dispatch(World& w, Vehicle& v) = 0;
    // Alighting/boarding at the stop the vehicle just reached; must set
    // v.departure_time. Line policies roll the plan over to the reversed run
    // when the stop is a terminal.
    virtual void process_arrival(World& w, Vehicle& v, double t) = 0;
    // Final boarding sweep before leaving a stop (walk-ins that showed up
    // during the dwell).
    virtual void on_departure(World& w, Vehicle& v, double t) { (void)w; (void)v; (void)t; }
};

std::unique_ptr<Policy> make_policy(const SystemDesign& design);

struct RunOptions {
    bool record_events = true;
    bool record_trace = false;
};

struct RunResult {
    std::string design_id;
    std::string scenario_id;
    std::uint64_t seed = 0;
    double warmup = 0.0;
    double sim_length = 0.0;
    std::string fingerprint;
    std::vector<PaxRecord> pax;
    std::vector<Vehicle> vehicles;
    std::vector<Event> events;
    std::vector<TraceRow> trace;
    std::vector<LegRecord> legs;
    Audit audit;
};

// Executes one design against one demand list (arrival_s relative to the
// demand window). Runs the warm-up, the demand window, then drains: no new
// demand appears and the loop continues until every passenger reaches a
// terminal state. Single-threaded and deterministic.
RunResult run_simulation(const ScenarioParams& scenario, const SystemDesign& design,
                         const std::vector<Passenger>& demand, const RunOptions& opts = {});

namespace engine_detail {
// Advances one vehicle across [t0, t1), handling dispatch, movement, stop
// arrivals and departures at exact fractional times. Exposed for tests.
void advance_vehicle(World& w, Vehicle& v, double t0, double t1);
}  // namespace engine_detail

}  // namespace transit
