#pragma once

#include <cstdint>

#include "vweb/rational.hpp"

namespace vweb {

// Deterministic pseudo-random stream (splitmix64).  Used wherever the
// engine needs reproducible choices: sample points, randomized identity
// tests, corpus generation.  The sequence depends only on the seed, never
// on platform or standard-library details.
class DetRng {
public:
    explicit DetRng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n), n >= 1, by rejection.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return v % n;
    }

    // Uniform integer in [lo, hi] inclusive.
    long range(long lo, long hi) {
        return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    // Random rational p/q with |p| <= max_num, 1 <= q <= max_den.
    Rat small_rat(long max_num, long max_den) {
        return rat(range(-max_num, max_num), range(1, max_den));
    }

private:
    std::uint64_t state_;
};

} // namespace vweb
