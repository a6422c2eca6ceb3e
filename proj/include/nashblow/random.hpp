/**
 * @file random.hpp
 * @brief Seeded, platform-independent rational sampling.
 *
 * Uses raw mt19937_64 output (whose sequence is fixed by the standard)
 * instead of std distributions, whose algorithms are implementation-defined.
 */
#pragma once

#include <cstdint>
#include <random>

#include "rational.hpp"

namespace nashblow {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform integer in [lo, hi].
    long uniform(long lo, long hi) {
        auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<long>(eng_() % span);
    }

    /// p/q with |p| <= max_num, 1 <= q <= max_den.
    Rational rational(long max_num, long max_den) {
        long p = uniform(-max_num, max_num);
        long q = uniform(1, max_den);
        return Rational(Integer(p), Integer(q));
    }

    Rational nonzero_rational(long max_num, long max_den) {
        for (;;) {
            Rational r = rational(max_num, max_den);
            if (!r.is_zero()) return r;
        }
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace nashblow
