#pragma once

#include "errors.hpp"
#include "numeric.hpp"

#include <cmath>
#include <concepts>
#include <cstdint>

namespace betaexp {

// Element of the quadratic field Q(beta) where beta is the positive root of
// x^2 = a*x + b.  Stored as p + q*beta with exact rational coordinates, so
// every field operation below is exact and comparisons never misclassify.
struct quad_value {
    Rat p;
    Rat q;
};

// Approximate arithmetic on plain doubles.  Comparisons treat values within
// `tolerance` as equal, which makes eq/cmp deliberately non-transitive; any
// code that sorts must use raw_lt and merge tolerance-equal runs afterwards.
class float_backend {
public:
    using scalar = double;
    static constexpr bool exact = false;

    explicit float_backend(double tolerance = 1e-10) : tol_(tolerance) {
        if (!(tolerance > 0.0) || !std::isfinite(tolerance))
            throw invalid_params_error("tolerance must be positive and finite");
    }

    double tolerance() const { return tol_; }

    scalar from_int(long long v) const { return static_cast<double>(v); }
    scalar from_ratio(long long num, long long den) const {
        return static_cast<double>(num) / static_cast<double>(den);
    }
    scalar from_rat(const Rat& r) const { return rat_to_double(r); }

    scalar add(scalar a, scalar b) const { return a + b; }
    scalar sub(scalar a, scalar b) const { return a - b; }
    scalar mul(scalar a, scalar b) const { return a * b; }
    scalar div(scalar a, scalar b) const {
        if (b == 0.0) throw invalid_params_error("division by zero");
        return a / b;
    }
    scalar neg(scalar a) const { return -a; }

    int sign(scalar v) const { return std::fabs(v) <= tol_ ? 0 : (v < 0.0 ? -1 : 1); }
    int cmp(scalar a, scalar b) const { return sign(a - b); }
    bool eq(scalar a, scalar b) const { return cmp(a, b) == 0; }
    bool lt(scalar a, scalar b) const { return cmp(a, b) < 0; }
    bool le(scalar a, scalar b) const { return cmp(a, b) <= 0; }

    // Tolerance-free order, safe for std::sort.
    bool raw_lt(scalar a, scalar b) const { return a < b; }

    double to_double(scalar v) const { return v; }

private:
    double tol_;
};

// Exact arithmetic on Q(beta), beta^2 = a*beta + b with integer a,b >= 1.
// The defining identity folds every product back to the p + q*beta form.
class quadratic_backend {
public:
    using scalar = quad_value;
    static constexpr bool exact = true;

    quadratic_backend(long long a, long long b) : a_(a), b_(b) {
        if (a < 1 || b < 1)
            throw invalid_polynomial_error("coefficients must be positive integers");
        disc_ = Rat(a) * a + Rat(4) * b;
        beta_dbl_ = (static_cast<double>(a) +
                     std::sqrt(static_cast<double>(a) * a + 4.0 * b)) / 2.0;
    }

    long long coeff_a() const { return a_; }
    long long coeff_b() const { return b_; }

    scalar from_int(long long v) const { return {Rat(v), Rat(0)}; }
    scalar from_ratio(long long num, long long den) const {
        if (den == 0) throw invalid_params_error("zero denominator");
        return {Rat(num) / den, Rat(0)};
    }
    scalar from_rat(const Rat& r) const { return {r, Rat(0)}; }
    scalar beta_unit() const { return {Rat(0), Rat(1)}; }

    scalar add(const scalar& u, const scalar& v) const { return {u.p + v.p, u.q + v.q}; }
    scalar sub(const scalar& u, const scalar& v) const { return {u.p - v.p, u.q - v.q}; }
    scalar neg(const scalar& u) const { return {-u.p, -u.q}; }

    scalar mul(const scalar& u, const scalar& v) const {
        // (p1 + q1 b)(p2 + q2 b) = p1 p2 + q1 q2 B + (p1 q2 + q1 p2 + q1 q2 A) b
        Rat qq = u.q * v.q;
        return {u.p * v.p + qq * b_, u.p * v.q + u.q * v.p + qq * a_};
    }

    scalar div(const scalar& u, const scalar& v) const {
        // Multiply by the algebraic conjugate (p + q*a) - q*beta; the product
        // v * conj(v) = p^2 + a p q - b q^2 is rational and zero only for v = 0.
        Rat norm = v.p * v.p + Rat(a_) * v.p * v.q - Rat(b_) * v.q * v.q;
        if (norm.sign() == 0) throw invalid_params_error("division by zero");
        scalar conj{v.p + Rat(a_) * v.q, -v.q};
        scalar w = mul(u, conj);
        return {w.p / norm, w.q / norm};
    }

    // Exact sign of p + q*beta.  With q != 0 the value is q*(beta + p/q), so
    // it reduces to comparing beta against the rational r = -p/q:
    // beta - r has the sign of sqrt(a^2+4b) - (2r - a), and once 2r - a >= 0
    // both sides are nonnegative and may be squared without losing the order.
    int sign(const scalar& v) const {
        const int qs = sign_of(v.q);
        if (qs == 0) return sign_of(v.p);
        const Rat r = Rat(-v.p) / v.q;
        const Rat t = Rat(2) * r - a_;
        int c;
        if (t.sign() < 0)
            c = 1;
        else
            c = sign_of(Rat(disc_ - t * t));
        return qs > 0 ? c : -c;
    }

    int cmp(const scalar& u, const scalar& v) const { return sign(sub(u, v)); }
    bool eq(const scalar& u, const scalar& v) const { return cmp(u, v) == 0; }
    bool lt(const scalar& u, const scalar& v) const { return cmp(u, v) < 0; }
    bool le(const scalar& u, const scalar& v) const { return cmp(u, v) <= 0; }
    bool raw_lt(const scalar& u, const scalar& v) const { return cmp(u, v) < 0; }

    double to_double(const scalar& v) const {
        return rat_to_double(v.p) + rat_to_double(v.q) * beta_dbl_;
    }

    double beta_double() const { return beta_dbl_; }

private:
    long long a_;
    long long b_;
    Rat disc_;        // a^2 + 4b
    double beta_dbl_; // (a + sqrt(a^2+4b)) / 2
};

template <class B>
concept numeric_backend = requires(const B b, const typename B::scalar& s) {
    typename B::scalar;
    { B::exact } -> std::convertible_to<bool>;
    { b.add(s, s) } -> std::same_as<typename B::scalar>;
    { b.sub(s, s) } -> std::same_as<typename B::scalar>;
    { b.mul(s, s) } -> std::same_as<typename B::scalar>;
    { b.div(s, s) } -> std::same_as<typename B::scalar>;
    { b.from_int(1ll) } -> std::same_as<typename B::scalar>;
    { b.sign(s) } -> std::same_as<int>;
    { b.cmp(s, s) } -> std::same_as<int>;
    { b.raw_lt(s, s) } -> std::same_as<bool>;
    { b.to_double(s) } -> std::same_as<double>;
};

template <numeric_backend B>
typename B::scalar abs_value(const B& backend, const typename B::scalar& v) {
    return backend.sign(v) < 0 ? backend.neg(v) : v;
}

} // namespace betaexp
