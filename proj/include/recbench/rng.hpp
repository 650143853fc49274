#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace recbench {

// Deterministic generator used everywhere randomness is needed.
//
// Algorithm (fixed, part of the file/checkpoint contract):
//   state seeding:  splitmix64 over the 64-bit seed fills four words
//   stream:         xoshiro256** (Blackman & Vigna, xorshift family)
//   uniform double: top 53 bits scaled by 2^-53, in [0, 1)
//   gaussian:       Box-Muller from two uniform draws, second value cached
//
// A given seed produces the same stream on every platform with IEEE-754
// doubles. Instances are single-owner; never share one across workers.
class Rng {
public:
    explicit Rng(uint64_t seed) {
        uint64_t x = seed;
        for (auto& word : state_) word = splitmix64(x);
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform real in [0, 1).
    double next_uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller on the uniform stream.
    double next_gaussian() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        // 1-u keeps the argument of log strictly positive.
        const double u1 = 1.0 - next_uniform();
        const double u2 = next_uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        cached_ = radius * std::sin(angle);
        have_cached_ = true;
        return radius * std::cos(angle);
    }

    /// Unbiased integer in [0, bound), bound >= 1. Rejection sampling.
    uint64_t next_below(uint64_t bound) {
        const uint64_t threshold = (~bound + 1) % bound; // 2^64 mod bound
        for (;;) {
            const uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    bool next_bernoulli(double p) { return next_uniform() < p; }

    /// Stateless mix used to derive independent per-entity sub-seeds.
    static uint64_t mix(uint64_t seed, uint64_t index) {
        uint64_t x = seed ^ (0x9e3779b97f4a7c15ULL * (index + 1));
        return splitmix64(x);
    }

private:
    static uint64_t splitmix64(uint64_t& x) {
        x += 0x9e3779b97f4a7c15ULL;
        uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static uint64_t rotl(uint64_t v, int k) {
        return (v << k) | (v >> (64 - k));
    }

    std::array<uint64_t, 4> state_{};
    double cached_ = 0.0;
    bool have_cached_ = false;
};

} // namespace recbench
