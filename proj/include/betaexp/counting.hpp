#pragma once

#include "beta.hpp"
#include "caps.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace betaexp {

struct count_result {
    int depth = 0;
    Int count = 1;                // number of admissible digit words
    double f_value = 0.0;         // (beta-1) * (beta/2)^n * count
    double garsia_erdos = 0.0;    // (beta/2)^n * count
    double log_rate = 0.0;        // ln(count)/n, 0 at depth 0
    // Float mode only: some branching decision fell inside the tolerance
    // band, so the integer count may differ from the exact one.
    bool boundary_sensitive = false;
};

namespace detail {

template <numeric_backend B>
count_result make_count_result(const beta_param<B>& param, int n, Int count, bool sensitive) {
    count_result r;
    r.depth = n;
    r.count = std::move(count);
    const double bd = param.beta_double();
    const double cd = r.count.template convert_to<double>();
    r.garsia_erdos = std::pow(bd / 2.0, n) * cd;
    r.f_value = (bd - 1.0) * r.garsia_erdos;
    r.log_rate = n > 0 ? std::log(cd) / n : 0.0;
    r.boundary_sensitive = sensitive;
    return r;
}

} // namespace detail

// Set of distinct depth-n branch images of x, each with the number of digit
// words reaching it.  The total weight is the prefix count; keeping images
// merged is what makes deep counting cheap for algebraic bases, where the
// orbit revisits few points.
template <numeric_backend B>
class prefix_frontier {
public:
    using scalar = typename B::scalar;
    using entry = std::pair<scalar, Int>;

    prefix_frontier(const beta_param<B>& param, scalar x) : param_(&param) {
        if (!param.in_interval(x))
            throw point_outside_interval_error("starting point outside the invariant interval");
        points_.emplace_back(std::move(x), Int(1));
    }

    int depth() const { return depth_; }
    bool boundary_sensitive() const { return sensitive_; }
    const std::vector<entry>& points() const { return points_; }

    Int count() const {
        Int total = 0;
        for (const auto& e : points_) total += e.second;
        return total;
    }

    void advance() {
        const auto& bk = param_->backend();
        std::vector<entry> next;
        next.reserve(points_.size() * 2);
        for (const auto& [y, mult] : points_) {
            const auto d = param_->allowed_digits(y);
            sensitive_ = sensitive_ || d.sensitive;
            if (d.zero) next.emplace_back(param_->apply_map(0, y), mult);
            if (d.one) next.emplace_back(param_->apply_map(1, y), mult);
        }
        std::sort(next.begin(), next.end(),
                  [&bk](const entry& l, const entry& r) { return bk.raw_lt(l.first, r.first); });
        points_.clear();
        for (auto& e : next) {
            if (!points_.empty() && bk.eq(points_.back().first, e.first))
                points_.back().second += e.second;
            else
                points_.push_back(std::move(e));
        }
        ++depth_;
    }

private:
    const beta_param<B>* param_;
    std::vector<entry> points_;
    int depth_ = 0;
    bool sensitive_ = false;
};

template <numeric_backend B>
count_result count_prefixes(const beta_param<B>& param, const typename B::scalar& x, int n,
                            const caps& limits = {}) {
    if (n < 0 || n > limits.depth_cap)
        throw depth_exceeded_error("depth exceeds cap");
    prefix_frontier<B> frontier(param, x);
    for (int i = 0; i < n; ++i) frontier.advance();
    return detail::make_count_result(param, n, frontier.count(), frontier.boundary_sensitive());
}

// All admissible words of length n in lexicographic order.
template <numeric_backend B>
std::vector<digit_word> enumerate_prefixes(const beta_param<B>& param, const typename B::scalar& x,
                                           int n, const caps& limits = {}) {
    if (n < 0 || n > limits.depth_cap)
        throw depth_exceeded_error("depth exceeds cap");
    if (!param.in_interval(x))
        throw point_outside_interval_error("starting point outside the invariant interval");
    std::vector<digit_word> out;
    digit_word current;
    current.reserve(static_cast<std::size_t>(n));

    auto rec = [&](auto&& self, const typename B::scalar& y, int depth) -> void {
        if (depth == n) {
            if (out.size() >= limits.enum_cap)
                throw output_too_large_error("enumeration exceeds word cap");
            out.push_back(current);
            return;
        }
        const auto d = param.allowed_digits(y);
        if (d.zero) {
            current.push_back(0);
            self(self, param.apply_map(0, y), depth + 1);
            current.pop_back();
        }
        if (d.one) {
            current.push_back(1);
            self(self, param.apply_map(1, y), depth + 1);
            current.pop_back();
        }
    };
    rec(rec, x, 0);
    return out;
}

// Independent check: a word w is admissible iff its value sum lands in
// [x - 1/((beta-1)*beta^n), x].  Tries all 2^n words; no pruning, no shared
// logic with the branch-based counter.
template <numeric_backend B>
Int count_by_interval_oracle(const beta_param<B>& param, const typename B::scalar& x, int n,
                             const caps& limits = {}) {
    if (n < 0 || n > limits.oracle_depth_cap)
        throw depth_exceeded_error("depth exceeds oracle cap");
    if (!param.in_interval(x))
        throw point_outside_interval_error("starting point outside the invariant interval");
    const auto& bk = param.backend();
    using scalar = typename B::scalar;

    const scalar lo = bk.sub(x, param.window_width(n));
    std::vector<scalar> inv_pow;
    inv_pow.reserve(static_cast<std::size_t>(n));
    {
        const scalar inv = bk.div(param.one(), param.beta());
        scalar p = param.one();
        for (int i = 0; i < n; ++i) {
            p = bk.mul(p, inv);
            inv_pow.push_back(p);
        }
    }

    Int hits = 0;
    auto rec = [&](auto&& self, int i, const scalar& sum) -> void {
        if (i == n) {
            if (bk.le(lo, sum) && bk.le(sum, x)) ++hits;
            return;
        }
        self(self, i + 1, sum);
        self(self, i + 1, bk.add(sum, inv_pow[static_cast<std::size_t>(i)]));
    };
    rec(rec, 0, param.zero());
    return hits;
}

struct growth_report {
    std::vector<count_result> levels;  // depths 1..n_max
    int tail_begin = 1;                // first depth inside the tail window
    double tail_f_min = 0.0;
    double tail_f_max = 0.0;
    double max_garsia_erdos = 0.0;
};

template <numeric_backend B>
growth_report growth_sequence(const beta_param<B>& param, const typename B::scalar& x, int n_max,
                              const caps& limits = {}) {
    if (n_max < 1 || n_max > limits.depth_cap)
        throw depth_exceeded_error("depth exceeds cap");
    growth_report rep;
    rep.levels.reserve(static_cast<std::size_t>(n_max));
    prefix_frontier<B> frontier(param, x);
    for (int n = 1; n <= n_max; ++n) {
        frontier.advance();
        rep.levels.push_back(
            detail::make_count_result(param, n, frontier.count(), frontier.boundary_sensitive()));
    }
    rep.tail_begin = (n_max + 1) / 2;
    rep.tail_f_min = rep.levels[static_cast<std::size_t>(rep.tail_begin) - 1].f_value;
    rep.tail_f_max = rep.tail_f_min;
    for (const auto& r : rep.levels) {
        rep.max_garsia_erdos = std::max(rep.max_garsia_erdos, r.garsia_erdos);
        if (r.depth >= rep.tail_begin) {
            rep.tail_f_min = std::min(rep.tail_f_min, r.f_value);
            rep.tail_f_max = std::max(rep.tail_f_max, r.f_value);
        }
    }
    return rep;
}

// Exact scalar form of (beta-1) * (beta/2)^n * count.
template <numeric_backend B>
typename B::scalar normalized_count_value(const beta_param<B>& param, int n, const Int& count) {
    const auto& bk = param.backend();
    using scalar = typename B::scalar;
    scalar ratio = bk.div(param.beta(), bk.from_int(2));
    scalar scale = bk.sub(param.beta(), param.one());
    for (int i = 0; i < n; ++i) scale = bk.mul(scale, ratio);
    return bk.mul(scale, bk.from_rat(Rat(count)));
}

} // namespace betaexp
