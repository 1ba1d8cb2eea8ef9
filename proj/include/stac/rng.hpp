#pragma once

#include <cstdint>

namespace stac {

/// Counter-based pseudorandom numbers via the SplitMix64 finalizer. Pure
/// function of (seed, counter), so output is identical on every platform and
/// independent of evaluation order.
inline std::uint64_t splitmix64(std::uint64_t v) {
    v += 0x9E3779B97F4A7C15ull;
    v = (v ^ (v >> 30)) * 0xBF58476D1CE4E5B9ull;
    v = (v ^ (v >> 27)) * 0x94D049BB133111EBull;
    return v ^ (v >> 31);
}

/// Uniform double in [0, 1) from the top 53 bits of the mix.
inline double uniform01(std::uint64_t seed, std::uint64_t counter) {
    const std::uint64_t bits = splitmix64(seed ^ splitmix64(counter));
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Uniform double in [-1, 1).
inline double uniform_signed(std::uint64_t seed, std::uint64_t counter) {
    return 2.0 * uniform01(seed, counter) - 1.0;
}

} // namespace stac
