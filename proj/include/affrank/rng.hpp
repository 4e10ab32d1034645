#pragma once

#include <cstdint>

namespace affrank {

// splitmix64: tiny deterministic generator for the randomized suites.
// Sequences depend only on the seed, never on scheduling.
struct Rng {
    uint64_t state;

    explicit Rng(uint64_t seed) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n). n must be positive.
    uint64_t below(uint64_t n) { return next() % n; }
};

} // namespace affrank
