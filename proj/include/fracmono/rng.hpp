#pragma once

#include <cstdint>
#include <random>

namespace fracmono {

// Deterministic random source for property trials. The scenario schema fixes the
// algorithm to mt19937_64, and doubles are derived from the top 53 bits rather
// than std::uniform_real_distribution, whose output is implementation-defined.
// This makes seeded runs byte-identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // Uniform in [0, 1).
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform index in [0, n).
    std::size_t index(std::size_t n) {
        auto k = static_cast<std::size_t>(uniform01() * static_cast<double>(n));
        return k < n ? k : n - 1;
    }

private:
    std::mt19937_64 eng_;
};

} // namespace fracmono
