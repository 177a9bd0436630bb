#pragma once

#include <cstdint>
#include <random>

#include "crlab/rational.hpp"

namespace crlab {

// Deterministic random source. std::mt19937_64 output is specified exactly by
// the standard, and the helpers below avoid std::uniform_int_distribution
// (whose mapping is implementation-defined), so the stream of values is
// identical on every platform for a given seed.
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    uint64_t raw() { return gen_(); }

    // Uniform in [lo, hi] via rejection sampling on a power-of-two window.
    int64_t int_in(int64_t lo, int64_t hi) {
        if (lo > hi) std::swap(lo, hi);
        const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
        uint64_t mask = span - 1;
        mask |= mask >> 1;
        mask |= mask >> 2;
        mask |= mask >> 4;
        mask |= mask >> 8;
        mask |= mask >> 16;
        mask |= mask >> 32;
        for (;;) {
            const uint64_t v = gen_() & mask;
            if (v < span) return lo + static_cast<int64_t>(v);
        }
    }

    double unit_double() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    Rational rational(int64_t max_num = 9, int64_t max_den = 9) {
        const int64_t num = int_in(-max_num, max_num);
        const int64_t den = int_in(1, max_den);
        return Rational(Integer(num), Integer(den));
    }

    Rational nonzero_rational(int64_t max_num = 9, int64_t max_den = 9) {
        for (;;) {
            Rational r = rational(max_num, max_den);
            if (r != 0) return r;
        }
    }

    GaussianRational gaussian(int64_t max_num = 9, int64_t max_den = 9) {
        Rational re = rational(max_num, max_den);
        Rational im = rational(max_num, max_den);
        return GaussianRational(re, im);
    }

    GaussianRational nonzero_gaussian(int64_t max_num = 9, int64_t max_den = 9) {
        for (;;) {
            GaussianRational g = gaussian(max_num, max_den);
            if (!g.is_zero()) return g;
        }
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace crlab
