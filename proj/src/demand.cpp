#include "transit/demand.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "transit/rng.hpp"

namespace transit {

namespace {

constexpr int kOdRetryCap = 10000;

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::vector<Passenger> generate_passengers(const ScenarioParams& scenario,
                                           double t_start, double t_end) {
    scenario.validate();
    if (!(t_start < t_end)) throw std::invalid_argument("t_start must precede t_end");

    std::vector<Passenger> out;
    if (scenario.lambda <= 0.0) return out;

    Rng rng(scenario.seed);
    const double rate_per_s = scenario.lambda / 3600.0;
    const double dt = scenario.time_step;

    double t = t_start;
    std::int64_t next_id = 1;
    while (true) {
        t += rng.exponential(rate_per_s);
        if (t >= t_end) break;

        Passenger p;
        p.id = next_id++;
        p.arrival_s = std::floor((t - t_start) / dt) * dt + t_start;

        int tries = 0;
        while (true) {
            p.origin = {rng.uniform(0.0, scenario.L), rng.uniform(0.0, scenario.W)};
            p.destination = {rng.uniform(0.0, scenario.L), rng.uniform(0.0, scenario.W)};
            if (scenario.dist(p.origin, p.destination) > scenario.zeta_a) break;
            if (++tries >= kOdRetryCap)
                throw std::runtime_error(
                    "OD rejection sampling exceeded retry cap; zeta_a is too large for "
                    "the region (zeta_a >= L + W?)");
        }
        out.push_back(p);
    }
    // Arrival times are nondecreasing by construction; ids break ties.
    return out;
}

std::string demand_to_csv(const std::vector<Passenger>& pax) {
    std::string s = "id,arrival_s,ox_km,oy_km,dx_km,dy_km\n";
    for (const auto& p : pax) {
        s += std::to_string(p.id);
        s += ',';
        s += fmt_double(p.arrival_s);
        s += ',';
        s += fmt_double(p.origin.x);
        s += ',';
        s += fmt_double(p.origin.y);
        s += ',';
        s += fmt_double(p.destination.x);
        s += ',';
        s += fmt_double(p.destination.y);
        s += '\n';
    }
    return s;
}

void write_demand_csv(const std::string& path, const std::vector<Passenger>& pax) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << demand_to_csv(pax);
}

std::vector<Passenger> parse_demand_csv(const std::string& text, const DemandLoadOptions& opt) {
    std::vector<Passenger> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (lineno == 1) {
            if (line != "id,arrival_s,ox_km,oy_km,dx_km,dy_km")
                throw std::runtime_error("demand CSV line 1: unexpected header");
            continue;
        }
        Passenger p;
        char* end = nullptr;
        const char* c = line.c_str();
        auto field = [&](const char* name) -> double {
            double v = std::strtod(c, &end);
            if (end == c)
                throw std::runtime_error("demand CSV line " + std::to_string(lineno) +
                                         ": cannot parse " + name);
            c = (*end == ',') ? end + 1 : end;
            return v;
        };
        p.id = static_cast<std::int64_t>(field("id"));
        p.arrival_s = field("arrival_s");
        p.origin.x = field("ox_km");
        p.origin.y = field("oy_km");
        p.destination.x = field("dx_km");
        p.destination.y = field("dy_km");

        if (opt.window_length > 0.0 &&
            (p.arrival_s < 0.0 || p.arrival_s >= opt.window_length))
            throw std::runtime_error("demand CSV line " + std::to_string(lineno) +
                                     ": arrival_s outside the demand window [0, " +
                                     std::to_string(opt.window_length) + ")");
        if (opt.zeta_a > 0.0 && opt.warnings &&
            rect_distance(p.origin, p.destination) <= opt.zeta_a)
            *opt.warnings << "warning: demand CSV line " << lineno
                          << ": OD pair within zeta_a (walkable); row retained\n";
        out.push_back(p);
    }
    std::stable_sort(out.begin(), out.end(), [](const Passenger& a, const Passenger& b) {
        if (a.arrival_s != b.arrival_s) return a.arrival_s < b.arrival_s;
        return a.id < b.id;
    });
    return out;
}

std::vector<Passenger> read_demand_csv(const std::string& path, const DemandLoadOptions& opt) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open demand CSV: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_demand_csv(ss.str(), opt);
}

std::string demand_fingerprint(const std::vector<Passenger>& pax) {
    std::string csv = demand_to_csv(pax);
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : csv) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace transit
