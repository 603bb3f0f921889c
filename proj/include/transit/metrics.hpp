#pragma once

#include <optional>
#include <string>
#include <vector>

#include "transit/engine.hpp"

namespace transit {

struct PassengerOutcome {
    std::int64_t id = 0;
    bool served = false;
    double t_access_s = 0.0;
    double t_wait_s = 0.0;
    double t_invehicle_s = 0.0;
    double t_egress_s = 0.0;
    double weighted_min = 0.0;
};

double weighted_travel_time_min(const PassengerOutcome& o, double gamma_v, double gamma_w,
                                double gamma_a);

struct RunReport {
    std::string design_id;
    std::string scenario_id;
    std::uint64_t seed = 0;
    std::string fingerprint;
    long long total_ridership = 0;
    long long rejected = 0;
    std::optional<double> avg_weighted_travel_time_min;
    double total_vmt_mi = 0.0;
    double total_vmt_km = 0.0;
    std::vector<PassengerOutcome> per_passenger;
    std::vector<double> per_vehicle_vmt_mi;
};

// Builds the report after a completed run. Performs the post-run audit:
// passenger conservation, threshold and capacity violations collected by the
// engine, the event-log double entry of the weighted travel time, and the
// two-way VMT computation. Throws std::runtime_error with diagnostics when
// the audit fails.
RunReport aggregate(const RunResult& run, const ScenarioParams& scenario,
                    const SystemDesign& design);

std::string report_csv_header();
std::string report_csv_row(const RunReport& r);
std::string per_passenger_csv(const RunReport& r);
std::string events_csv(const std::vector<Event>& events);
std::string trace_csv(const std::vector<TraceRow>& rows);

// Side-by-side KPIs with ratios against the first report. All reports must
// share the demand fingerprint.
std::string compare_csv(const std::vector<RunReport>& reports);

}  // namespace transit
