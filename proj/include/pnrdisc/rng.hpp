#pragma once

#include <cstdint>

// Deterministic pseudo-random streams for the Monte Carlo receiver.
//
// Stream layout: every trial owns its own xoshiro256** generator whose state
// is expanded by SplitMix64 from a mix of (seed, trial index). Results are
// therefore independent of how trials are partitioned across threads, and
// bit-identical for a fixed seed on any platform (integer state path; the
// only floating-point step is the fixed (x >> 11) * 2^-53 conversion).

namespace pnrdisc {

struct SplitMix64 {
    uint64_t state;

    explicit SplitMix64(uint64_t seed) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

class Xoshiro256StarStar {
  public:
    explicit Xoshiro256StarStar(uint64_t seed) {
        SplitMix64 mix(seed);
        for (auto& word : s_) word = mix.next();
    }

    uint64_t next() {
        const uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform double in [0, 1), 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    uint64_t s_[4];
};

// Generator for one trial of one run; distinct (seed, trial) pairs give
// statistically independent streams.
inline Xoshiro256StarStar make_trial_rng(uint64_t seed, uint64_t trial) {
    SplitMix64 mix(seed ^ (trial * 0xD1B54A32D192ED03ULL + 0x9E3779B97F4A7C15ULL));
    return Xoshiro256StarStar(mix.next());
}

}  // namespace pnrdisc
