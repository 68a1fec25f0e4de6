#pragma once

#include <cstdint>

#include "qsr/pc_oracle.hpp"

namespace qsr {

// Deterministic stream of pseudo-random 64-bit words (splitmix64); fixed
// across platforms so seeded reports are stable.
struct RandomStream {
    std::uint64_t state;

    explicit RandomStream(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        state += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // uniform in [0, bound)
    std::uint64_t below(std::uint64_t bound) { return next() % bound; }
};

// Random instance: per unordered pair, each base relation is kept with
// probability keep_prob (re-drawn while empty); the mirror cell is the
// converse image.
BinaryNetwork random_network(const Calculus& c, int n, RandomStream& rng,
                             double keep_prob = 0.5);

} // namespace qsr
