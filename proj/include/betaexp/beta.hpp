#pragma once

#include "backend.hpp"
#include "caps.hpp"
#include "errors.hpp"
#include "word.hpp"

#include <utility>

namespace betaexp {

// All derived constants of a base beta in (1,2): the invariant interval
// [0, 1/(beta-1)], the two branch maps T_d(x) = beta*x - d, and the band
// [1/beta, 1/(beta*(beta-1))] on which both digits keep the orbit inside.
template <numeric_backend B>
class beta_param {
public:
    using backend_type = B;
    using scalar = typename B::scalar;

    beta_param(B backend, scalar beta)
        : backend_(std::move(backend)),
          beta_(std::move(beta)),
          zero_(backend_.from_int(0)),
          one_(backend_.from_int(1)) {
        right_ = backend_.div(one_, backend_.sub(beta_, one_));
        switch_lo_ = backend_.div(one_, beta_);
        switch_hi_ = backend_.div(right_, beta_);
        beta_dbl_ = backend_.to_double(beta_);
    }

    const B& backend() const { return backend_; }
    const scalar& beta() const { return beta_; }
    const scalar& zero() const { return zero_; }
    const scalar& one() const { return one_; }
    const scalar& interval_right() const { return right_; }  // 1/(beta-1)
    const scalar& switch_lo() const { return switch_lo_; }   // 1/beta
    const scalar& switch_hi() const { return switch_hi_; }   // 1/(beta*(beta-1))
    double beta_double() const { return beta_dbl_; }

    // T_d(x) = beta*x - d
    scalar apply_map(int digit, const scalar& x) const {
        scalar y = backend_.mul(beta_, x);
        if (digit == 0) return y;
        return backend_.sub(y, backend_.from_int(digit));
    }

    bool in_interval(const scalar& x) const {
        return backend_.cmp(zero_, x) <= 0 && backend_.cmp(x, right_) <= 0;
    }

    struct digit_set {
        bool zero;
        bool one;
        // True when one of the deciding comparisons landed inside the
        // tolerance band; exact backends never set it.
        bool sensitive;
    };

    // Digit d is allowed at x exactly when T_d(x) stays in the interval.
    digit_set allowed_digits(const scalar& x) const {
        const scalar t0 = apply_map(0, x);
        const scalar t1 = apply_map(1, x);
        const int a0 = backend_.cmp(zero_, t0);
        const int b0 = backend_.cmp(t0, right_);
        const int a1 = backend_.cmp(zero_, t1);
        const int b1 = backend_.cmp(t1, right_);
        bool sensitive = false;
        if constexpr (!B::exact)
            sensitive = a0 == 0 || b0 == 0 || a1 == 0 || b1 == 0;
        return {a0 <= 0 && b0 <= 0, a1 <= 0 && b1 <= 0, sensitive};
    }

    enum class region { lower, switch_zone, upper };

    region region_of(const scalar& x) const {
        const digit_set d = allowed_digits(x);
        if (d.zero && d.one) return region::switch_zone;
        if (d.zero) return region::lower;
        if (d.one) return region::upper;
        throw point_outside_interval_error("point admits no digit; outside the invariant interval");
    }

    scalar pow_beta(int n) const {
        scalar r = one_;
        for (int i = 0; i < n; ++i) r = backend_.mul(r, beta_);
        return r;
    }

    // Width of the admissible-value window at depth n: 1/((beta-1)*beta^n).
    scalar window_width(int n) const { return backend_.div(right_, pow_beta(n)); }

    scalar midpoint(const scalar& a, const scalar& b) const {
        return backend_.mul(backend_.add(a, b), backend_.from_ratio(1, 2));
    }

    // Value sum of a digit word: sum of w_i * beta^{-i}, evaluated by Horner
    // from the last digit so exact backends stay small.
    scalar word_value(const digit_word& w) const {
        scalar s = zero_;
        for (auto it = w.rbegin(); it != w.rend(); ++it)
            s = backend_.div(backend_.add(s, backend_.from_int(*it)), beta_);
        return s;
    }

private:
    B backend_;
    scalar beta_;
    scalar zero_;
    scalar one_;
    scalar right_;
    scalar switch_lo_;
    scalar switch_hi_;
    double beta_dbl_;
};

inline beta_param<float_backend> make_float_beta(double value, double tolerance = 1e-10) {
    if (!(value > 1.0 && value < 2.0))
        throw out_of_range_error("beta must lie strictly between 1 and 2");
    float_backend backend(tolerance);
    return beta_param<float_backend>(backend, value);
}

// Positive root of x^2 = a*x + b.  The root is admissible iff it lies in
// (1,2), i.e. (2-a)^2 < a^2 + 4b < (4-a)^2 with both bounds strict.
inline beta_param<quadratic_backend> make_quadratic_beta(long long a, long long b) {
    if (a < 1 || b < 1)
        throw invalid_polynomial_error("coefficients must be positive integers");
    const long long disc = a * a + 4 * b;
    const bool above_one = (2 - a) < 0 || disc > (2 - a) * (2 - a);
    const bool below_two = (4 - a) > 0 && disc < (4 - a) * (4 - a);
    if (!above_one || !below_two)
        throw invalid_polynomial_error("root of x^2 = a*x + b is not in (1,2)");
    quadratic_backend backend(a, b);
    return beta_param<quadratic_backend>(backend, backend.beta_unit());
}

} // namespace betaexp
