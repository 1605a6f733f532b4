#pragma once

// Counter-based random numbers. Every value is a pure function of
// (seed, counter), so any element of a stream can be produced on its own and
// parallel work reproduces the sequential result exactly.

#include <array>
#include <cstdint>

namespace signfull::rng {

using Philox4x32Counter = std::array<std::uint32_t, 4>;
using Philox4x32Key = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds (Salmon et al., Random123).
Philox4x32Counter philox4x32_10(Philox4x32Counter ctr, Philox4x32Key key) noexcept;

/// Domain tags keep the streams used by different subsystems disjoint.
enum class Stream : std::uint32_t {
    Projection = 0x5052'4f4a,  // "PROJ"
    BivariatePair = 0x5041'4952,  // "PAIR"
    Fisher = 0x4649'5348,  // "FISH"
    Synthetic = 0x5359'4e54,  // "SYNT"
};

/// 128 random bits for counter (a, b) in `stream`.
std::array<std::uint64_t, 2> bits128(std::uint64_t seed, std::uint64_t a, std::uint32_t b,
                                     Stream stream) noexcept;

/// Maps 64 random bits to a uniform in the open interval (0, 1). Uses 52 bits
/// so the largest value, 1 - 2^-53, is still below 1.
inline double uniform_open(std::uint64_t bits) noexcept {
    return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

/// Standard normal quantile, Wichura's AS 241 (PPND16); relative accuracy ~1e-16.
double normal_quantile(double p) noexcept;

/// Two independent N(0,1) deviates for counter (a, b).
std::array<double, 2> normal2(std::uint64_t seed, std::uint64_t a, std::uint32_t b,
                              Stream stream) noexcept;

}  // namespace signfull::rng
