#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace leptovar {

// Seeded generator with hand-rolled mappings from the raw 64-bit stream, so
// a seed reproduces the same trials with any standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [lo, hi]. Modulo bias is below 2^-40 for the small
    // ranges used here.
    std::int64_t integer(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(engine_() % span);
    }

    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    // Student t with 2 degrees of freedom: infinite variance, finite draws.
    double heavy_tailed() {
        double u = uniform();
        while (u <= 0.0) u = uniform();
        const double chi2 = -2.0 * std::log(u);
        return normal() / std::sqrt(chi2 / 2.0);
    }

private:
    std::mt19937_64 engine_;
};

} // namespace leptovar
