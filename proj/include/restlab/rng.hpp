#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace restlab {

// Counter-based generator: sample i of stream s under seed k is a pure
// function of (k, s, i), so parallel consumers can draw disjoint index
// ranges and reproduce results independent of scheduling.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(mix(seed ^ 0x9e3779b97f4a7c15ull) ^ mix(stream + 0x3c6ef372fe94f82bull)) {}

    std::uint64_t bits(std::uint64_t counter) const {
        return mix(key_ + counter * 0xbf58476d1ce4e5b9ull);
    }

    // Uniform in [0, 1).
    double uniform(std::uint64_t counter) const {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller on sub-counters (2i, 2i+1).
    double normal(std::uint64_t counter) const {
        double u1 = uniform(2 * counter);
        double u2 = uniform(2 * counter + 1);
        if (u1 < 0x1.0p-60) u1 = 0x1.0p-60;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    std::uint64_t integer_below(std::uint64_t counter, std::uint64_t n) const {
        return bits(counter) % n;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ull;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebull;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t key_;
};

} // namespace restlab
