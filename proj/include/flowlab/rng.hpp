#pragma once

#include <cstdint>
#include <random>

namespace flowlab {

// Deterministic random source. mt19937_64's output sequence is fixed by the
// C++ standard, so identical seeds give identical streams on every platform.
// The standard library *distributions* are not specified that way, so the few
// samplers we need are written out by hand below.
class Prng {
public:
    // trial_index separates per-trial streams derived from one user seed.
    explicit Prng(std::uint64_t seed, std::uint64_t trial_index = 0) {
        std::seed_seq seq{
            static_cast<std::uint32_t>(seed),
            static_cast<std::uint32_t>(seed >> 32),
            static_cast<std::uint32_t>(trial_index),
            static_cast<std::uint32_t>(trial_index >> 32),
        };
        gen_.seed(seq);
    }

    std::uint64_t word() { return gen_(); }

    // Uniform over {0, ..., m-1} by rejection: keep w % m only when w falls
    // below the largest multiple of m in [0, 2^64), so every residue is
    // exactly equally likely.
    std::uint64_t below(std::uint64_t m) {
        std::uint64_t rem = (0 - m) % m;  // (2^64 - m) % m == 2^64 mod m
        std::uint64_t limit = 0 - rem;    // m * floor(2^64 / m), or 0 when m | 2^64
        for (;;) {
            std::uint64_t w = gen_();
            if (rem == 0 || w < limit) return w % m;
        }
    }

    // Geometric with success probability 1/2 on {1, 2, ...}: the number of
    // fair coin flips up to and including the first head. Implemented by
    // scanning words for the first set bit; an all-zero word adds 64 tails
    // and draws again.
    std::uint64_t geometric_half() {
        std::uint64_t tails = 0;
        for (;;) {
            std::uint64_t w = gen_();
            if (w != 0) {
                unsigned tz = 0;
                while (((w >> tz) & 1u) == 0) ++tz;
                return tails + tz + 1;
            }
            tails += 64;
        }
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace flowlab
