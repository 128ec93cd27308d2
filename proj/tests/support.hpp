#pragma once

#include <betaexp/betaexp.hpp>

#include <cstdint>

// Deterministic input generation for property tests.  Uses xorshift64*, a
// different generator family than the library's stream, so test inputs do
// not depend on the seeding contract under test.
namespace testsupport {

struct gen {
    std::uint64_t state;

    explicit gen(std::uint64_t seed) : state(seed | 1) {}

    std::uint64_t next() {
        state ^= state >> 12;
        state ^= state << 25;
        state ^= state >> 27;
        return state * 0x2545F4914F6CDD1Dull;
    }

    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    long long in_range(long long lo, long long hi) {
        return lo + static_cast<long long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    // Uniform-ish rational in [0,1] with denominator at most max_den.
    betaexp::Rat rat_unit(long long max_den = 1000) {
        const long long den = in_range(1, max_den);
        const long long num = in_range(0, den);
        return betaexp::Rat(num, den);
    }
};

// Random point of the invariant interval, exact in the backend's arithmetic.
template <class B>
typename B::scalar random_point(const betaexp::beta_param<B>& param, gen& g) {
    const auto& bk = param.backend();
    return bk.mul(param.interval_right(), bk.from_rat(g.rat_unit()));
}

} // namespace testsupport
