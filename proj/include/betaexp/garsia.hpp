#pragma once

#include "beta.hpp"
#include "caps.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

namespace betaexp {

// Purely atomic probability measure with atoms in increasing order and
// weights summing to `total`; the mass of atom i is weights[i]/total, exact
// by construction.  For the level-n measure total = 2^n, so every mass is an
// integer multiple of 2^{-n}.
template <numeric_backend B>
struct discrete_measure {
    std::vector<typename B::scalar> atoms;
    std::vector<std::uint64_t> weights;
    std::uint64_t total = 0;
    // Float mode: a merge of two numerically close atoms happened whose gap
    // was within a decade of the tolerance, so the atom count is fragile.
    bool suspicious_merge = false;

    std::size_t size() const { return atoms.size(); }
    Rat mass(std::size_t i) const { return Rat(Int(weights[i]), Int(total)); }
};

namespace detail {

// All sums of w_i * beta^{-i} over digits w in {0,1}^{[i_begin..i_end]},
// with coincident sums merged and their word counts added.  Merging after
// every digit keeps the list linear-size for algebraic bases.
template <numeric_backend B>
std::vector<std::pair<typename B::scalar, std::uint64_t>> half_sums(const beta_param<B>& param,
                                                                    int i_begin, int i_end,
                                                                    bool& suspicious) {
    const auto& bk = param.backend();
    using scalar = typename B::scalar;
    using entry = std::pair<scalar, std::uint64_t>;

    std::vector<entry> sums;
    sums.emplace_back(param.zero(), 1);
    const scalar inv = bk.div(param.one(), param.beta());
    scalar p = param.one();
    for (int i = 1; i < i_begin; ++i) p = bk.mul(p, inv);

    for (int i = i_begin; i <= i_end; ++i) {
        p = bk.mul(p, inv);
        std::vector<entry> next;
        next.reserve(sums.size() * 2);
        for (const auto& [s, w] : sums) {
            next.emplace_back(s, w);
            next.emplace_back(bk.add(s, p), w);
        }
        std::sort(next.begin(), next.end(),
                  [&bk](const entry& l, const entry& r) { return bk.raw_lt(l.first, r.first); });
        sums.clear();
        for (auto& e : next) {
            if (!sums.empty() && bk.eq(sums.back().first, e.first)) {
                sums.back().second += e.second;
                if constexpr (!B::exact) {
                    const double gap =
                        std::fabs(bk.to_double(e.first) - bk.to_double(sums.back().first));
                    if (gap > 0.1 * bk.tolerance()) suspicious = true;
                }
            } else {
                sums.push_back(std::move(e));
            }
        }
    }
    return sums;
}

} // namespace detail

// Distribution of sum of a_i * beta^{-i} over fair independent digits
// a_1..a_n.  Built from two half-depth sum lists whose cross sums are
// enumerated in increasing order through a heap, so equal atoms arrive
// adjacently and merge on the fly.
template <numeric_backend B>
discrete_measure<B> level_measure(const beta_param<B>& param, int n, const caps& limits = {}) {
    if (n < 0 || n > limits.measure_depth_cap)
        throw depth_exceeded_error("depth exceeds measure cap");
    const auto& bk = param.backend();
    using scalar = typename B::scalar;

    discrete_measure<B> m;
    m.total = std::uint64_t(1) << n;
    if (n == 0) {
        m.atoms = {param.zero()};
        m.weights = {1};
        return m;
    }

    const int k = n / 2;
    const auto lo = detail::half_sums(param, 1, k, m.suspicious_merge);
    const auto hi = detail::half_sums(param, k + 1, n, m.suspicious_merge);

    struct heap_entry {
        scalar sum;
        std::uint32_t i;
        std::uint32_t j;
    };
    auto heap_after = [&bk](const heap_entry& l, const heap_entry& r) {
        return bk.raw_lt(r.sum, l.sum);
    };
    std::priority_queue<heap_entry, std::vector<heap_entry>, decltype(heap_after)> queue(heap_after);
    for (std::uint32_t i = 0; i < lo.size(); ++i)
        queue.push({bk.add(lo[i].first, hi[0].first), i, 0});

    bool have_last = false;
    scalar last_in_run = param.zero();
    while (!queue.empty()) {
        heap_entry e = queue.top();
        queue.pop();
        const std::uint64_t w = lo[e.i].second * hi[e.j].second;
        if (have_last && bk.eq(last_in_run, e.sum)) {
            m.weights.back() += w;
            if constexpr (!B::exact) {
                const double gap =
                    std::fabs(bk.to_double(e.sum) - bk.to_double(last_in_run));
                if (gap > 0.1 * bk.tolerance()) m.suspicious_merge = true;
            }
        } else {
            m.atoms.push_back(e.sum);
            m.weights.push_back(w);
        }
        last_in_run = e.sum;
        have_last = true;
        if (e.j + 1 < hi.size())
            queue.push({bk.add(lo[e.i].first, hi[e.j + 1].first), e.i, e.j + 1});
    }
    return m;
}

// Shannon entropy in nats.  With every weight an integer over a common
// total this is ln(total) - (1/total) * sum of w*ln(w), which keeps clean
// fixtures (all weights equal a power of two) exact to the last bit.
template <numeric_backend B>
double entropy(const discrete_measure<B>& m) {
    if (m.total == 0) throw invalid_params_error("empty measure");
    double weighted = 0.0;
    double comp = 0.0;
    for (const auto w : m.weights) {
        if (w <= 1) continue;
        const double term = static_cast<double>(w) * std::log(static_cast<double>(w));
        const double y = term - comp;
        const double t = weighted + y;
        comp = (t - weighted) - y;
        weighted = t;
    }
    return std::log(static_cast<double>(m.total)) - weighted / static_cast<double>(m.total);
}

struct garsia_row {
    int depth = 0;
    double entropy_nats = 0.0;
    double ratio = 0.0;     // entropy / depth
    double log_beta = 0.0;  // comparison line: ratio below it signals singularity
};

template <numeric_backend B>
std::vector<garsia_row> garsia_ratios(const beta_param<B>& param, int n_max,
                                      const caps& limits = {}) {
    if (n_max < 1 || n_max > limits.measure_depth_cap)
        throw depth_exceeded_error("depth exceeds measure cap");
    std::vector<garsia_row> rows;
    rows.reserve(static_cast<std::size_t>(n_max));
    const double lb = std::log(param.beta_double());
    for (int n = 1; n <= n_max; ++n) {
        const auto m = level_measure(param, n, limits);
        const double h = entropy(m);
        rows.push_back({n, h, h / n, lb});
    }
    return rows;
}

struct cluster_histogram {
    int windows = 0;
    std::vector<std::uint64_t> distinct_atoms;
    std::vector<std::uint64_t> weight_in_window;
    std::vector<double> avg_density;  // window mass / window width
    double max_over_mean = 0.0;
    double min_over_mean = 0.0;
    double max_over_min = 0.0;  // +inf when some window is empty
};

// Bin the atoms into equal-width windows [j*R/W, (j+1)*R/W); the last window
// is closed on the right.  Uneven window masses quantify how strongly atoms
// cluster, which is what drags the entropy below full coin entropy.
template <numeric_backend B>
cluster_histogram histogram_of(const beta_param<B>& param, const discrete_measure<B>& m,
                               int window_count) {
    if (window_count < 1) throw invalid_params_error("window count must be positive");
    const auto& bk = param.backend();
    using scalar = typename B::scalar;

    cluster_histogram h;
    h.windows = window_count;
    h.distinct_atoms.assign(static_cast<std::size_t>(window_count), 0);
    h.weight_in_window.assign(static_cast<std::size_t>(window_count), 0);

    std::vector<scalar> bounds;
    bounds.reserve(static_cast<std::size_t>(window_count) + 1);
    for (int j = 0; j <= window_count; ++j)
        bounds.push_back(bk.mul(param.interval_right(), bk.from_ratio(j, window_count)));

    std::size_t j = 0;
    for (std::size_t i = 0; i < m.atoms.size(); ++i) {
        while (j + 1 < static_cast<std::size_t>(window_count) &&
               !bk.raw_lt(m.atoms[i], bounds[j + 1]))
            ++j;
        ++h.distinct_atoms[j];
        h.weight_in_window[j] += m.weights[i];
    }

    const double width = param.backend().to_double(param.interval_right()) / window_count;
    h.avg_density.reserve(static_cast<std::size_t>(window_count));
    double dmax = 0.0;
    double dmin = std::numeric_limits<double>::infinity();
    for (int w = 0; w < window_count; ++w) {
        const double mass =
            static_cast<double>(h.weight_in_window[static_cast<std::size_t>(w)]) /
            static_cast<double>(m.total);
        const double d = mass / width;
        h.avg_density.push_back(d);
        dmax = std::max(dmax, d);
        dmin = std::min(dmin, d);
    }
    const double mean = 1.0 / param.backend().to_double(param.interval_right());
    h.max_over_mean = dmax / mean;
    h.min_over_mean = dmin / mean;
    h.max_over_min = dmin > 0.0 ? dmax / dmin : std::numeric_limits<double>::infinity();
    return h;
}

template <numeric_backend B>
cluster_histogram clustering_profile(const beta_param<B>& param, int n, int window_count,
                                     const caps& limits = {}) {
    return histogram_of(param, level_measure(param, n, limits), window_count);
}

// Total mass on the closed interval [lo, hi], exact.
template <numeric_backend B>
Rat interval_mass(const beta_param<B>& param, const discrete_measure<B>& m,
                  const typename B::scalar& lo, const typename B::scalar& hi) {
    const auto& bk = param.backend();
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < m.atoms.size(); ++i) {
        if (bk.le(lo, m.atoms[i]) && bk.le(m.atoms[i], hi)) acc += m.weights[i];
    }
    return Rat(Int(acc), Int(m.total));
}

} // namespace betaexp
