#pragma once

#include <cmath>
#include <cstdint>

// Counter-based deterministic random draws: every sample is a pure function of
// (seed, stream, k, t), so draws are reproducible independently of call order
// and of how many other draws happened. Streams separate the independent uses
// (initial states, disturbances, assumption checks, per channel).

namespace ailc::rng {

inline constexpr std::uint64_t kStreamInitialState = 0x11;
inline constexpr std::uint64_t kStreamDisturbance = 0x22;
inline constexpr std::uint64_t kStreamAssumption = 0x33;

/// Stream id for a per-channel substream.
inline constexpr std::uint64_t channel_stream(std::uint64_t base, int channel) {
    return base + 0x100u * static_cast<std::uint64_t>(channel);
}

inline constexpr std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// 64-bit hash of the full counter tuple.
inline constexpr std::uint64_t mix(std::uint64_t seed, std::uint64_t stream, std::uint64_t k,
                                   std::uint64_t t, std::uint64_t salt = 0) {
    std::uint64_t h = splitmix64(seed ^ 0x6a09e667f3bcc909ull);
    h = splitmix64(h ^ stream);
    h = splitmix64(h ^ k);
    h = splitmix64(h ^ t);
    h = splitmix64(h ^ salt);
    return h;
}

/// Uniform draw in [0, 1).
inline double unit(std::uint64_t seed, std::uint64_t stream, std::uint64_t k, std::uint64_t t,
                   std::uint64_t salt = 0) {
    return static_cast<double>(mix(seed, stream, k, t, salt) >> 11) * 0x1.0p-53;
}

/// Uniform draw in [lo, hi).
inline double uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t k, std::uint64_t t,
                      double lo, double hi, std::uint64_t salt = 0) {
    return lo + (hi - lo) * unit(seed, stream, k, t, salt);
}

/// Standard normal draw (Box-Muller; both uniforms come from salted counters,
/// the log argument is kept strictly positive).
inline double gaussian(std::uint64_t seed, std::uint64_t stream, std::uint64_t k, std::uint64_t t,
                       std::uint64_t salt = 0) {
    const double u1 =
        (static_cast<double>(mix(seed, stream, k, t, salt ^ 0xa5a5) >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = unit(seed, stream, k, t, salt ^ 0x5a5a);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace ailc::rng
