#pragma once

#include <cstdint>
#include <random>

namespace hexrelay {

// Seeded PRNG wrapper. Draws are derived from the raw mt19937_64 stream
// instead of std distributions, so sequences are identical across standard
// library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0, 1), 53-bit resolution.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + uniform01() * (b - a); }

    // Uniform integer in [0, n). n must be >= 1.
    std::uint32_t uniform_int(std::uint32_t n) {
        auto v = static_cast<std::uint32_t>(uniform01() * static_cast<double>(n));
        return v < n ? v : n - 1;
    }

    bool bernoulli(double p) { return uniform01() < p; }

private:
    std::mt19937_64 engine_;
};

}  // namespace hexrelay
