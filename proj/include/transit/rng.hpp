#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace transit {

// Deterministic random stream. Distributions are inverted by hand instead of
// going through std:: distribution objects, whose output is
// implementation-defined and would break cross-platform reproducibility.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Uniform in [0, 1).
    double uniform01() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Exponential with the given rate (events per unit time).
    double exponential(double rate) {
        return -std::log1p(-uniform01()) / rate;
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace transit
