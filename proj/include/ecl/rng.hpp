#pragma once

// Deterministic randomness plumbing.  All stochastic operations draw raw
// 64-bit words from std::mt19937_64 (whose output is fixed by the
// standard) and compare them against exact rational thresholds; the
// standard <random> distributions are avoided because their output is
// implementation-defined.

#include "ecl/rational.hpp"

#include <cstdint>
#include <random>

namespace ecl {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Stable per-subtask seed: identical for a given (seed, index) no matter
// how work is scheduled.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(seed ^ splitmix64(index + 1));
}

// floor(q * 2^64) clamped to [0, 2^64); u < threshold(q) happens with
// probability q up to 2^-64.
std::uint64_t scaled_threshold(const Rational& q);

inline bool bernoulli_draw(std::mt19937_64& gen, std::uint64_t threshold) {
    return gen() < threshold;
}

}  // namespace ecl
