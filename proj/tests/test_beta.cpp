#include "support.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace betaexp;

TEST_CASE("float base factory enforces the open interval (1,2)") {
    CHECK_THROWS_AS(make_float_beta(1.0), out_of_range_error);
    CHECK_THROWS_AS(make_float_beta(2.0), out_of_range_error);
    CHECK_THROWS_AS(make_float_beta(0.5), out_of_range_error);
    CHECK_THROWS_AS(make_float_beta(2.5), out_of_range_error);
    CHECK_THROWS_AS(make_float_beta(-1.5), out_of_range_error);
    CHECK_NOTHROW(make_float_beta(1.0000001));
    CHECK_NOTHROW(make_float_beta(1.9999999));
}

TEST_CASE("quadratic base factory accepts exactly the bases in (1,2)") {
    CHECK_NOTHROW(make_quadratic_beta(1, 1));
    // Exhaustive over small coefficients: x^2 = a*x + b has its positive root
    // in (1,2) only for a = b = 1.
    for (long long a = 1; a <= 6; ++a) {
        for (long long b = 1; b <= 6; ++b) {
            const double root = (a + std::sqrt(static_cast<double>(a * a + 4 * b))) / 2.0;
            if (root > 1.0 && root < 2.0) {
                CHECK((a == 1 && b == 1));
                CHECK_NOTHROW(make_quadratic_beta(a, b));
            } else {
                CHECK_THROWS_AS(make_quadratic_beta(a, b), invalid_polynomial_error);
            }
        }
    }
    CHECK_THROWS_AS(make_quadratic_beta(0, 1), invalid_polynomial_error);
    CHECK_THROWS_AS(make_quadratic_beta(1, 0), invalid_polynomial_error);
    CHECK_THROWS_AS(make_quadratic_beta(-2, 1), invalid_polynomial_error);
}

TEST_CASE("golden base constants") {
    const auto phi = make_quadratic_beta(1, 1);
    const auto& bk = phi.backend();
    // 1/(beta-1) = beta, 1/beta = beta - 1, 1/(beta*(beta-1)) = 1
    CHECK(bk.eq(phi.interval_right(), phi.beta()));
    CHECK(bk.eq(phi.switch_lo(), bk.sub(phi.beta(), phi.one())));
    CHECK(bk.eq(phi.switch_hi(), phi.one()));
    CHECK(phi.beta_double() == Catch::Approx((1.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-15));
}

TEST_CASE("float base constants at beta = 1.8") {
    const auto p = make_float_beta(1.8);
    CHECK(p.interval_right() == Catch::Approx(1.25).margin(1e-15));
    CHECK(p.switch_lo() == Catch::Approx(1.0 / 1.8).margin(1e-15));
    CHECK(p.switch_hi() == Catch::Approx(1.25 / 1.8).margin(1e-15));
}

TEST_CASE("branch maps") {
    const auto phi = make_quadratic_beta(1, 1);
    const auto& bk = phi.backend();
    // T_0(1) = beta, T_1(1) = beta - 1
    CHECK(bk.eq(phi.apply_map(0, phi.one()), phi.beta()));
    CHECK(bk.eq(phi.apply_map(1, phi.one()), bk.sub(phi.beta(), phi.one())));
    // T_1(1/beta) = 0
    CHECK(bk.sign(phi.apply_map(1, phi.switch_lo())) == 0);
}

TEST_CASE("interval membership at the endpoints") {
    const auto phi = make_quadratic_beta(1, 1);
    CHECK(phi.in_interval(phi.zero()));
    CHECK(phi.in_interval(phi.interval_right()));
    CHECK_FALSE(phi.in_interval(phi.backend().from_ratio(-1, 1000000)));
    CHECK_FALSE(phi.in_interval(phi.backend().add(phi.interval_right(),
                                                  phi.backend().from_ratio(1, 1000000))));

    const auto f = make_float_beta(1.5, 1e-10);
    CHECK(f.in_interval(0.0));
    CHECK(f.in_interval(-5e-11));   // inside the tolerance band
    CHECK_FALSE(f.in_interval(-5e-10));
}

TEST_CASE("digit allowance matches the switch band characterization") {
    const auto phi = make_quadratic_beta(1, 1);
    const auto& bk = phi.backend();
    testsupport::gen g(0xBADA55u);
    for (int trial = 0; trial < 500; ++trial) {
        const auto x = testsupport::random_point(phi, g);
        const auto d = phi.allowed_digits(x);
        CHECK_FALSE(d.sensitive);  // exact backend never flags
        const bool below = bk.lt(x, phi.switch_lo());
        const bool above = bk.lt(phi.switch_hi(), x);
        if (below) {
            CHECK((d.zero && !d.one));
            CHECK(phi.region_of(x) == beta_param<quadratic_backend>::region::lower);
        } else if (above) {
            CHECK((!d.zero && d.one));
            CHECK(phi.region_of(x) == beta_param<quadratic_backend>::region::upper);
        } else {
            CHECK((d.zero && d.one));
            CHECK(phi.region_of(x) == beta_param<quadratic_backend>::region::switch_zone);
        }
    }
}

TEST_CASE("digit allowance trichotomy in float mode away from boundaries") {
    const auto p = make_float_beta(1.7, 1e-10);
    testsupport::gen g(0xF10A7u);
    for (int trial = 0; trial < 500; ++trial) {
        const double x = g.unit() * p.interval_right();
        // Skip the tolerance neighborhood where either answer is acceptable.
        if (std::fabs(x - p.switch_lo()) < 1e-8 || std::fabs(x - p.switch_hi()) < 1e-8) continue;
        const auto d = p.allowed_digits(x);
        if (x < p.switch_lo()) {
            CHECK((d.zero && !d.one));
        } else if (x > p.switch_hi()) {
            CHECK((!d.zero && d.one));
        } else {
            CHECK((d.zero && d.one));
        }
    }
}

TEST_CASE("switch band endpoints allow both digits") {
    const auto phi = make_quadratic_beta(1, 1);
    const auto dlo = phi.allowed_digits(phi.switch_lo());
    CHECK((dlo.zero && dlo.one));
    const auto dhi = phi.allowed_digits(phi.switch_hi());
    CHECK((dhi.zero && dhi.one));
    // Just outside, one digit drops out.
    const auto& bk = phi.backend();
    const auto eps = bk.from_ratio(1, 1000000007);
    const auto left = phi.allowed_digits(bk.sub(phi.switch_lo(), eps));
    CHECK((left.zero && !left.one));
    const auto right = phi.allowed_digits(bk.add(phi.switch_hi(), eps));
    CHECK((!right.zero && right.one));
}

TEST_CASE("word value evaluates digit sums") {
    const auto phi = make_quadratic_beta(1, 1);
    const auto& bk = phi.backend();
    CHECK(bk.sign(phi.word_value({})) == 0);
    CHECK(bk.eq(phi.word_value({1, 0}), phi.switch_lo()));        // 1/beta
    CHECK(bk.eq(phi.word_value({1, 1}), phi.one()));              // 1/beta + 1/beta^2 = 1
    CHECK(bk.eq(phi.word_value({0, 1}), bk.div(phi.one(), phi.pow_beta(2))));
}

TEST_CASE("orbit identity ties words to their value sums") {
    // Applying the maps along any word w gives
    //   T_w(x) = beta^n * (x - sum of w_i beta^{-i}),
    // so x - T_w(x)/beta^n recovers word_value(w) exactly.
    const auto phi = make_quadratic_beta(1, 1);
    const auto& bk = phi.backend();
    testsupport::gen g(0x90D5u);
    for (int trial = 0; trial < 100; ++trial) {
        const auto x = testsupport::random_point(phi, g);
        digit_word w;
        auto y = x;
        for (int i = 0; i < 10; ++i) {
            const int digit = static_cast<int>(g.next() & 1);
            w.push_back(static_cast<std::uint8_t>(digit));
            y = phi.apply_map(digit, y);
        }
        const auto recovered = bk.sub(x, bk.div(y, phi.pow_beta(10)));
        CHECK(bk.eq(recovered, phi.word_value(w)));
    }
}

TEST_CASE("window width"){
    const auto phi = make_quadratic_beta(1, 1);
    const auto& bk = phi.backend();
    // 1/((beta-1)*beta^2) = 1/beta for the golden base
    CHECK(bk.eq(phi.window_width(2), phi.switch_lo()));
    CHECK(bk.eq(phi.window_width(0), phi.interval_right()));
}
