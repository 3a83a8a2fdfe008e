#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace bass {

// All randomness in the library goes through these helpers instead of
// std::*_distribution, whose output is implementation-defined. This keeps
// seeded runs (and the golden hashes derived from them) stable across
// standard libraries.

using Rng = std::mt19937_64;

// Derives an independent stream for (seed, index), e.g. one per dataset item.
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
    // splitmix64 scramble of the pair
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z = z ^ (z >> 31);
    return Rng(z);
}

// Uniform in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_range(Rng& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

// Uniform integer in [0, n), unbiased via rejection.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = rng();
    while (v >= limit) v = rng();
    return v % n;
}

// Standard normal via Box-Muller (one value per call; no cached state so
// interleaving with other draws stays reproducible).
inline double normal01(Rng& rng) {
    double u1 = uniform01(rng);
    while (u1 <= 0.0) u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace bass
