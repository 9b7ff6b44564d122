#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace stp {

/// Deterministic pseudo-random stream used by the synthetic generators.
/// The construction is fixed so that reimplementations in other languages
/// reproduce identical data bit for bit:
///
///   state update (SplitMix64):
///     state <- state + 0x9E3779B97F4A7C15  (mod 2^64)
///     z <- state
///     z <- (z XOR (z >> 30)) * 0xBF58476D1CE4E5B9
///     z <- (z XOR (z >> 27)) * 0x94D049BB133111EB
///     output <- z XOR (z >> 31)
///
///   uniform in [0, 1):   u = (output >> 11) * 2^-53
///
///   standard normal (Box-Muller, cosine branch only; each draw consumes
///   exactly two uniforms u1, u2 in that order):
///     normal = sqrt(-2 ln(1 - u1)) * cos(2 pi u2)
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double next_normal() {
        const double u1 = next_unit();
        const double u2 = next_unit();
        return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t state_;
};

} // namespace stp
