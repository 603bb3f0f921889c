#include "transit/design.hpp"

#include <numeric>
#include <stdexcept>

namespace transit {

const char* SystemDesign::type_name() const {
    if (fixed()) return "fixed";
    if (flex()) return "flex";
    return "ondemand";
}

int SystemDesign::fleet_size() const {
    if (auto* d = fixed()) return d->V;
    if (auto* d = flex()) return d->V;
    return ondemand()->V;
}

int SystemDesign::capacity() const {
    if (auto* d = fixed()) return d->K;
    if (auto* d = flex()) return d->K;
    return ondemand()->K;
}

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

void SystemDesign::validate() const {
    if (auto* d = fixed()) {
        require(d->S >= 2, "S must be >= 2");
        require(d->f > 0.0, "f must be > 0");
        require(d->V >= 1, "V must be >= 1");
        require(d->K >= 1, "K must be >= 1");
        require(d->t_d >= 0.0, "t_d must be >= 0");
        require(d->t_c > 0.0, "t_c must be > 0");
        if (!d->stop_x.empty()) {
            require(static_cast<int>(d->stop_x.size()) == d->S,
                    "stop_x length must equal S");
            for (std::size_t i = 1; i < d->stop_x.size(); ++i)
                require(d->stop_x[i] > d->stop_x[i - 1], "stop_x must be strictly increasing");
        }
    } else if (auto* d = flex()) {
        require(d->S_c >= 2, "S_c must be >= 2");
        require(d->f > 0.0, "f must be > 0");
        require(d->V >= 1, "V must be >= 1");
        require(d->K >= 1, "K must be >= 1");
        require(d->t_d >= 0.0, "t_d must be >= 0");
        require(d->t_c > 0.0, "t_c must be > 0");
        require(d->zeta_w > 0.0, "zeta_w must be > 0");
        require(d->zeta_b >= 0.0, "zeta_b must be >= 0");
    } else {
        const OnDemandDesign* od = ondemand();
        require(od->S_d >= 1, "S_d must be >= 1");
        require(od->V >= 1, "V must be >= 1");
        require(od->K >= 1, "K must be >= 1");
        require(od->t_d >= 0.0, "t_d must be >= 0");
        require(od->zeta_w > 0.0, "zeta_w must be > 0");
        require(od->zeta_d >= 1.0, "zeta_d must be >= 1");
        if (!od->mu_s.empty()) {
            require(static_cast<int>(od->mu_s.size()) == od->S_d, "mu_s length must equal S_d");
            int total = std::accumulate(od->mu_s.begin(), od->mu_s.end(), 0);
            require(total == od->V, "mu_s must sum to V");
            for (int n : od->mu_s) require(n >= 0, "mu_s entries must be >= 0");
        }
    }
}

double flex_segment_travel_time(const FlexDesign& d, double L, double v_o) {
    return (L / (d.S_c - 1)) / v_o * 3600.0;
}

double flex_segment_slack(const FlexDesign& d, double L, double v_o) {
    return d.t_c / (d.S_c - 1) - flex_segment_travel_time(d, L, v_o) - d.t_d;
}

std::vector<int> depot_allocation(const OnDemandDesign& d) {
    if (!d.mu_s.empty()) return d.mu_s;
    std::vector<int> alloc(d.S_d, d.V / d.S_d);
    for (int i = 0; i < d.V % d.S_d; ++i) alloc[i] += 1;
    return alloc;
}

double warmup_duration(const SystemDesign& design) {
    if (auto* d = design.fixed()) return 2.0 * d->t_c;
    if (auto* d = design.flex()) return 2.0 * d->t_c;
    return 0.0;
}

}  // namespace transit
