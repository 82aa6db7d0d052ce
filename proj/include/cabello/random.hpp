// Portable random streams: mt19937_64 output is fixed by the standard, the
// conversions below avoid the implementation-defined std distributions.

#pragma once

#include <cstdint>
#include <random>

namespace cabello {

/// Engine for stream `stream` of a run seeded with `seed`.
inline std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

/// 53-bit uniform in [0, 1).
inline double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * unit_uniform(rng);
}

}  // namespace cabello
