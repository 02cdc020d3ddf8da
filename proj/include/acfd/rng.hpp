#pragma once

#include <cstdint>

namespace acfd {

/// Counter-based uniform generator: the splitmix64 finalizer applied to
/// seed + (counter+1)*0x9E3779B97F4A7C15. Each draw depends only on (seed,
/// counter), so cell i can be generated independently of every other cell —
/// the parallelization-order-independence the random initial condition
/// relies on. Constants are the published splitmix64 ones.
struct CounterRng {
    std::uint64_t seed = 0;

    std::uint64_t bits(std::uint64_t counter) const noexcept {
        std::uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform on [0, 1), 53 random bits.
    double uniform01(std::uint64_t counter) const noexcept {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

    /// Uniform on [-1, 1).
    double uniform_pm1(std::uint64_t counter) const noexcept {
        return 2.0 * uniform01(counter) - 1.0;
    }
};

} // namespace acfd
