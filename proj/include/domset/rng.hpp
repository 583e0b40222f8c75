#pragma once

#include <cstdint>
#include <span>

namespace domset {

// Deterministic xoshiro256** generator. We avoid <random> distributions on
// purpose: their output is implementation-defined, and seeded runs must be
// reproducible bit-for-bit.
class Rng {
public:
    explicit Rng(uint64_t seed) {
        uint64_t x = seed;
        for (auto& word : state_) word = split_mix(x);
    }

    // Independent stream derived from (seed, tag, index); used to give each
    // path / trial its own generator so schedules can be reordered freely.
    static Rng stream(uint64_t seed, uint64_t tag, uint64_t index = 0) {
        uint64_t x = seed;
        uint64_t a = split_mix(x) ^ (tag * 0x9e3779b97f4a7c15ULL);
        uint64_t b = split_mix(a) ^ (index * 0xbf58476d1ce4e5b9ULL);
        return Rng(split_mix(b));
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

    // Uniform in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, n). Lemire's multiply-shift with rejection.
    uint64_t below(uint64_t n) {
        uint64_t x = next_u64();
        __uint128_t m = static_cast<__uint128_t>(x) * n;
        auto lo = static_cast<uint64_t>(m);
        if (lo < n) {
            const uint64_t threshold = (0ULL - n) % n;
            while (lo < threshold) {
                x = next_u64();
                m = static_cast<__uint128_t>(x) * n;
                lo = static_cast<uint64_t>(m);
            }
        }
        return static_cast<uint64_t>(m >> 64);
    }

    // Index sampled from an (unnormalized is fine) discrete pmf by linear scan.
    // Supports here are tiny: 4 input symbols or a handful of offsets.
    size_t sample(std::span<const double> pmf) {
        double total = 0;
        for (double w : pmf) total += w;
        double u = next_double() * total;
        for (size_t i = 0; i + 1 < pmf.size(); ++i) {
            u -= pmf[i];
            if (u < 0) return i;
        }
        return pmf.empty() ? 0 : pmf.size() - 1;
    }

private:
    static uint64_t split_mix(uint64_t& x) {
        x += 0x9e3779b97f4a7c15ULL;
        uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static uint64_t rotl(uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

    uint64_t state_[4];
};

}  // namespace domset
