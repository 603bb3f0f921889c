#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "transit/passenger.hpp"
#include "transit/scenario.hpp"

namespace transit {

// Poisson arrivals on [t_start, t_end), quantized to the scenario time step,
// with OD pairs drawn uniformly over the region and redrawn until they are
// farther apart than zeta_a. Deterministic in (scenario.seed, parameters).
std::vector<Passenger> generate_passengers(const ScenarioParams& scenario,
                                           double t_start, double t_end);

// CSV exchange format: id,arrival_s,ox_km,oy_km,dx_km,dy_km
// Coordinates are printed with round-trip precision so that a written and
// re-read list is bit-identical to the in-memory one.
std::string demand_to_csv(const std::vector<Passenger>& pax);
void write_demand_csv(const std::string& path, const std::vector<Passenger>& pax);

struct DemandLoadOptions {
    // When set, arrivals outside [0, window_length) are an error.
    double window_length = -1.0;
    // OD pairs within zeta_a are warned about but kept (external lists may
    // encode real data). <= 0 disables the check.
    double zeta_a = -1.0;
    std::ostream* warnings = nullptr;
};

std::vector<Passenger> parse_demand_csv(const std::string& text, const DemandLoadOptions& opt = {});
std::vector<Passenger> read_demand_csv(const std::string& path, const DemandLoadOptions& opt = {});

// FNV-1a content hash of the canonical CSV serialization, used to enforce
// that compared runs consumed the identical passenger dataset.
std::string demand_fingerprint(const std::vector<Passenger>& pax);

}  // namespace transit
