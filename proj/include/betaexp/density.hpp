#pragma once

#include "beta.hpp"
#include "caps.hpp"
#include "counting.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

namespace betaexp {

// Step function on the invariant interval.  breaks is strictly increasing
// (no two entries compare equal), breaks.front() = 0, breaks.back() =
// 1/(beta-1), and values[i] holds on (breaks[i], breaks[i+1]).  Evaluation at
// a breakpoint uses the right-hand piece, at the right endpoint the last one.
template <numeric_backend B>
struct piecewise_constant {
    std::vector<typename B::scalar> breaks;
    std::vector<typename B::scalar> values;

    std::size_t piece_count() const { return values.size(); }
};

template <numeric_backend B>
piecewise_constant<B> make_piecewise(const beta_param<B>& param,
                                     std::vector<typename B::scalar> breaks,
                                     std::vector<typename B::scalar> values) {
    const auto& bk = param.backend();
    if (breaks.size() < 2 || values.size() + 1 != breaks.size())
        throw invalid_params_error("breaks/values size mismatch");
    for (std::size_t i = 1; i < breaks.size(); ++i) {
        if (!bk.raw_lt(breaks[i - 1], breaks[i]) || bk.eq(breaks[i - 1], breaks[i]))
            throw invalid_params_error("breakpoints must be strictly increasing");
    }
    if (!bk.eq(breaks.front(), param.zero()) || !bk.eq(breaks.back(), param.interval_right()))
        throw support_violation_error("support must be the full invariant interval");
    piecewise_constant<B> f;
    f.breaks = std::move(breaks);
    f.values = std::move(values);
    return f;
}

// (beta-1) times the indicator of the invariant interval; integrates to 1.
template <numeric_backend B>
piecewise_constant<B> indicator_density(const beta_param<B>& param) {
    const auto& bk = param.backend();
    piecewise_constant<B> f;
    f.breaks = {param.zero(), param.interval_right()};
    f.values = {bk.sub(param.beta(), param.one())};
    return f;
}

template <numeric_backend B>
typename B::scalar eval(const beta_param<B>& param, const piecewise_constant<B>& f,
                        const typename B::scalar& x) {
    const auto& bk = param.backend();
    if (bk.raw_lt(x, f.breaks.front()) || bk.raw_lt(f.breaks.back(), x))
        return param.zero();
    auto it = std::upper_bound(
        f.breaks.begin(), f.breaks.end(), x,
        [&bk](const typename B::scalar& a, const typename B::scalar& b) { return bk.raw_lt(a, b); });
    std::size_t idx = it == f.breaks.begin()
                          ? 0
                          : static_cast<std::size_t>(it - f.breaks.begin()) - 1;
    if (idx >= f.values.size()) idx = f.values.size() - 1;
    return f.values[idx];
}

namespace detail {

// Compensated sum; exact backends see the compensation cancel to zero.
template <numeric_backend B>
class kahan_sum {
public:
    explicit kahan_sum(const B& bk) : bk_(&bk), acc_(bk.from_int(0)), comp_(bk.from_int(0)) {}

    void add(const typename B::scalar& term) {
        const auto y = bk_->sub(term, comp_);
        const auto t = bk_->add(acc_, y);
        comp_ = bk_->sub(bk_->sub(t, acc_), y);
        acc_ = t;
    }

    const typename B::scalar& value() const { return acc_; }

private:
    const B* bk_;
    typename B::scalar acc_;
    typename B::scalar comp_;
};

template <numeric_backend B>
void check_support(const beta_param<B>& param, const piecewise_constant<B>& f) {
    const auto& bk = param.backend();
    if (f.breaks.size() < 2 || f.values.size() + 1 != f.breaks.size())
        throw invalid_params_error("malformed piecewise function");
    if (!bk.eq(f.breaks.front(), param.zero()) ||
        !bk.eq(f.breaks.back(), param.interval_right()))
        throw support_violation_error("support must be the full invariant interval");
}

// Sort, drop tolerance-equal duplicates, pin the endpoints to the exact
// interval bounds so repeated pullbacks cannot drift.
template <numeric_backend B>
std::vector<typename B::scalar> normalize_breaks(const beta_param<B>& param,
                                                 std::vector<typename B::scalar> breaks) {
    const auto& bk = param.backend();
    using scalar = typename B::scalar;
    std::sort(breaks.begin(), breaks.end(),
              [&bk](const scalar& a, const scalar& b) { return bk.raw_lt(a, b); });
    std::vector<scalar> out;
    out.reserve(breaks.size());
    for (auto& b : breaks) {
        if (out.empty() || !bk.eq(out.back(), b)) out.push_back(std::move(b));
    }
    out.front() = param.zero();
    out.back() = param.interval_right();
    return out;
}

} // namespace detail

// One application of the averaging pullback
//   (Pf)(x) = (beta/2) * (f(beta*x) + f(beta*x - 1)).
// New breakpoints are the preimages b/beta and (b+1)/beta of the old ones;
// on each refined piece the value is constant, so a midpoint probe fixes it.
template <numeric_backend B>
piecewise_constant<B> apply_transfer(const beta_param<B>& param, const piecewise_constant<B>& f,
                                     const caps& limits = {}) {
    detail::check_support(param, f);
    const auto& bk = param.backend();
    using scalar = typename B::scalar;

    std::vector<scalar> pre;
    pre.reserve(2 * f.breaks.size());
    for (const auto& b : f.breaks) {
        pre.push_back(bk.div(b, param.beta()));
        pre.push_back(bk.div(bk.add(b, param.one()), param.beta()));
    }
    std::vector<scalar> breaks = detail::normalize_breaks(param, std::move(pre));
    if (breaks.size() - 1 > limits.piece_budget)
        throw piece_budget_error("piece count exceeds budget");

    const scalar half_beta = bk.div(param.beta(), bk.from_int(2));
    std::vector<scalar> values;
    values.reserve(breaks.size() - 1);
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const scalar m = param.midpoint(breaks[i], breaks[i + 1]);
        const scalar s =
            bk.add(eval(param, f, param.apply_map(0, m)), eval(param, f, param.apply_map(1, m)));
        values.push_back(bk.mul(half_beta, s));
    }

    piecewise_constant<B> g;
    g.breaks = std::move(breaks);
    g.values = std::move(values);
    return g;
}

// n-fold pullback of the flat density.
template <numeric_backend B>
piecewise_constant<B> level_density(const beta_param<B>& param, int n, const caps& limits = {}) {
    if (n < 0 || n > limits.depth_cap)
        throw depth_exceeded_error("depth exceeds cap");
    piecewise_constant<B> f = indicator_density(param);
    for (int i = 0; i < n; ++i) f = apply_transfer(param, f, limits);
    return f;
}

template <numeric_backend B>
typename B::scalar integral(const beta_param<B>& param, const piecewise_constant<B>& f) {
    const auto& bk = param.backend();
    detail::kahan_sum<B> sum(bk);
    for (std::size_t i = 0; i < f.values.size(); ++i)
        sum.add(bk.mul(f.values[i], bk.sub(f.breaks[i + 1], f.breaks[i])));
    return sum.value();
}

template <numeric_backend B>
struct refined_pair {
    std::vector<typename B::scalar> breaks;
    std::vector<typename B::scalar> f_values;
    std::vector<typename B::scalar> g_values;
};

// Common refinement of two step functions over the shared grid.
template <numeric_backend B>
refined_pair<B> common_refinement(const beta_param<B>& param, const piecewise_constant<B>& f,
                                  const piecewise_constant<B>& g, const caps& limits = {}) {
    detail::check_support(param, f);
    detail::check_support(param, g);
    const auto& bk = param.backend();
    using scalar = typename B::scalar;

    std::vector<scalar> merged;
    merged.reserve(f.breaks.size() + g.breaks.size());
    merged.insert(merged.end(), f.breaks.begin(), f.breaks.end());
    merged.insert(merged.end(), g.breaks.begin(), g.breaks.end());
    refined_pair<B> r;
    r.breaks = detail::normalize_breaks(param, std::move(merged));
    if (r.breaks.size() - 1 > limits.piece_budget)
        throw piece_budget_error("piece count exceeds budget");

    r.f_values.reserve(r.breaks.size() - 1);
    r.g_values.reserve(r.breaks.size() - 1);
    for (std::size_t i = 0; i + 1 < r.breaks.size(); ++i) {
        const scalar m = param.midpoint(r.breaks[i], r.breaks[i + 1]);
        r.f_values.push_back(eval(param, f, m));
        r.g_values.push_back(eval(param, g, m));
    }
    return r;
}

template <numeric_backend B>
typename B::scalar l1_distance(const beta_param<B>& param, const piecewise_constant<B>& f,
                               const piecewise_constant<B>& g, const caps& limits = {}) {
    const auto& bk = param.backend();
    const refined_pair<B> r = common_refinement(param, f, g, limits);
    detail::kahan_sum<B> sum(bk);
    for (std::size_t i = 0; i + 1 < r.breaks.size(); ++i) {
        const auto diff = abs_value(bk, bk.sub(r.f_values[i], r.g_values[i]));
        sum.add(bk.mul(diff, bk.sub(r.breaks[i + 1], r.breaks[i])));
    }
    return sum.value();
}

// Level density rescaled to unit mass.  Exact backends already carry unit
// mass; in float mode this sheds the accumulated rounding in the integral.
template <numeric_backend B>
piecewise_constant<B> density_estimate(const beta_param<B>& param, int n, const caps& limits = {}) {
    const auto& bk = param.backend();
    piecewise_constant<B> f = level_density(param, n, limits);
    const auto mass = integral(param, f);
    if (bk.sign(mass) <= 0) throw invalid_params_error("density has nonpositive mass");
    for (auto& v : f.values) v = bk.div(v, mass);
    return f;
}

struct envelope {
    int tail_begin = 1;
    double lower = 0.0;
    double upper = 0.0;
};

// Range of the normalized count value at x over the tail window
// [ceil(window_frac * n_max), n_max]; a tight envelope signals convergence.
template <numeric_backend B>
envelope tail_envelope(const beta_param<B>& param, const typename B::scalar& x, int n_max,
                       double window_frac = 0.5, const caps& limits = {}) {
    if (!(window_frac > 0.0 && window_frac <= 1.0))
        throw invalid_params_error("window fraction must be in (0,1]");
    growth_report rep = growth_sequence(param, x, n_max, limits);
    envelope env;
    env.tail_begin = std::max(1, static_cast<int>(std::ceil(window_frac * n_max)));
    bool first = true;
    for (const auto& r : rep.levels) {
        if (r.depth < env.tail_begin) continue;
        if (first) {
            env.lower = env.upper = r.f_value;
            first = false;
        } else {
            env.lower = std::min(env.lower, r.f_value);
            env.upper = std::max(env.upper, r.f_value);
        }
    }
    return env;
}

struct sample_diagnostic {
    double x = 0.0;
    std::vector<double> f_curve;  // normalized count value at depths 1..n_max
    double tail_min = 0.0;
    double tail_max = 0.0;
    double oscillation = 0.0;
};

struct convergence_report {
    int n_max = 0;
    int tail_begin = 1;
    std::vector<sample_diagnostic> samples;
    double mean_oscillation = 0.0;
    double median_oscillation = 0.0;
    double max_oscillation = 0.0;
};

// Tail oscillation of the normalized count value across sample points.
template <numeric_backend B>
convergence_report convergence_diagnostic(const beta_param<B>& param,
                                          const std::vector<typename B::scalar>& sample_points,
                                          int n_max, double window_frac = 0.5,
                                          const caps& limits = {}) {
    if (sample_points.empty()) throw invalid_params_error("no sample points");
    if (!(window_frac > 0.0 && window_frac <= 1.0))
        throw invalid_params_error("window fraction must be in (0,1]");
    convergence_report rep;
    rep.n_max = n_max;
    rep.tail_begin = std::max(1, static_cast<int>(std::ceil(window_frac * n_max)));
    rep.samples.reserve(sample_points.size());

    for (const auto& x : sample_points) {
        growth_report g = growth_sequence(param, x, n_max, limits);
        sample_diagnostic d;
        d.x = param.backend().to_double(x);
        d.f_curve.reserve(g.levels.size());
        bool first = true;
        for (const auto& r : g.levels) {
            d.f_curve.push_back(r.f_value);
            if (r.depth < rep.tail_begin) continue;
            if (first) {
                d.tail_min = d.tail_max = r.f_value;
                first = false;
            } else {
                d.tail_min = std::min(d.tail_min, r.f_value);
                d.tail_max = std::max(d.tail_max, r.f_value);
            }
        }
        d.oscillation = d.tail_max - d.tail_min;
        rep.samples.push_back(std::move(d));
    }

    std::vector<double> osc;
    osc.reserve(rep.samples.size());
    for (const auto& d : rep.samples) osc.push_back(d.oscillation);
    std::sort(osc.begin(), osc.end());
    rep.max_oscillation = osc.back();
    double total = 0.0;
    for (double v : osc) total += v;
    rep.mean_oscillation = total / static_cast<double>(osc.size());
    const std::size_t mid = osc.size() / 2;
    rep.median_oscillation =
        osc.size() % 2 ? osc[mid] : 0.5 * (osc[mid - 1] + osc[mid]);
    return rep;
}

} // namespace betaexp
