#pragma once

#include "beta.hpp"
#include "caps.hpp"
#include "counting.hpp"

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

namespace betaexp {

// Deterministic fair-coin stream (splitmix64).  Eight bytes of state, so
// copying one is as cheap as copying a pointer; identical seeds give
// identical streams on every platform.
class bit_stream {
public:
    explicit bit_stream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_word() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    int next_bit() { return static_cast<int>(next_word() >> 63); }

    // Uniform in [0,1) with 53 random bits; bypasses the library
    // distributions, whose output is implementation-defined.
    double next_unit() { return static_cast<double>(next_word() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

// Stable per-index substream seed.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) {
    bit_stream s(root + 0x9E3779B97F4A7C15ull * (index + 1));
    return s.next_word();
}

// Coin sequence feeding the random dynamics: either a finite explicit word
// or an endless seeded stream.  next() is functional; the advanced copy is
// returned alongside the drawn bit so states can branch and be replayed.
class omega_source {
public:
    static omega_source from_word(digit_word bits) {
        omega_source s;
        s.word_ = std::make_shared<const digit_word>(std::move(bits));
        return s;
    }

    static omega_source from_seed(std::uint64_t seed) {
        omega_source s;
        s.stream_ = bit_stream(seed);
        return s;
    }

    bool is_stream() const { return !word_; }
    std::int64_t consumed() const { return consumed_; }

    std::pair<int, omega_source> next() const {
        omega_source advanced = *this;
        int bit;
        if (advanced.word_) {
            if (advanced.pos_ >= advanced.word_->size())
                throw omega_exhausted_error("coin word exhausted");
            bit = (*advanced.word_)[advanced.pos_++];
        } else {
            bit = advanced.stream_.next_bit();
        }
        ++advanced.consumed_;
        return {bit, std::move(advanced)};
    }

private:
    omega_source() = default;

    std::shared_ptr<const digit_word> word_;  // null in stream mode
    std::size_t pos_ = 0;
    bit_stream stream_{0};
    std::int64_t consumed_ = 0;
};

template <numeric_backend B>
struct orbit_state {
    typename B::scalar x;
    omega_source omega;
    std::int64_t step_count = 0;
    std::int64_t hit_count = 0;
    // Engage to record the digit emitted by every step.
    std::optional<digit_word> digit_log;
};

template <numeric_backend B>
struct step_outcome {
    orbit_state<B> state;
    int digit;
};

// One step of the random dynamics: outside the switch band the digit is
// forced; inside it a coin is drawn and the hit count advances.
template <numeric_backend B>
step_outcome<B> k_step(const beta_param<B>& param, orbit_state<B> s) {
    int digit;
    switch (param.region_of(s.x)) {
    case beta_param<B>::region::lower:
        digit = 0;
        break;
    case beta_param<B>::region::upper:
        digit = 1;
        break;
    default: {
        auto [bit, advanced] = s.omega.next();
        digit = bit;
        s.omega = std::move(advanced);
        ++s.hit_count;
        break;
    }
    }
    s.x = param.apply_map(digit, s.x);
    ++s.step_count;
    if (s.digit_log) s.digit_log->push_back(static_cast<std::uint8_t>(digit));
    return {std::move(s), digit};
}

// Number of coins consumed while generating the first n digits from x.
template <numeric_backend B>
std::int64_t hitting_number(const beta_param<B>& param, typename B::scalar x, omega_source omega,
                            int n) {
    orbit_state<B> s{std::move(x), std::move(omega)};
    for (int i = 0; i < n; ++i) s = k_step(param, std::move(s)).state;
    return s.hit_count;
}

// Sum of 2^{hits} over the full binary coin tree of depth-n trajectories.
// Each leaf of the tree carries coin probability 2^{-hits}, so this sum is
// the expectation of 2^{hits} against coin measure, scaled to an integer.
template <numeric_backend B>
Int choice_tree_count(const beta_param<B>& param, const typename B::scalar& x, int n,
                      const caps& limits = {}) {
    if (n < 0 || n > limits.depth_cap)
        throw depth_exceeded_error("depth exceeds cap");
    if (!param.in_interval(x))
        throw point_outside_interval_error("starting point outside the invariant interval");
    auto rec = [&](auto&& self, const typename B::scalar& y, int depth) -> Int {
        if (depth == n) return Int(1);
        switch (param.region_of(y)) {
        case beta_param<B>::region::lower:
            return self(self, param.apply_map(0, y), depth + 1);
        case beta_param<B>::region::upper:
            return self(self, param.apply_map(1, y), depth + 1);
        default:
            return self(self, param.apply_map(0, y), depth + 1) +
                   self(self, param.apply_map(1, y), depth + 1);
        }
    };
    return rec(rec, x, 0);
}

struct mc_params {
    std::int64_t orbits = 10'000;
    std::int64_t steps = 10'000;
    std::int64_t burn_in = -1;  // -1: steps/10
    std::uint64_t seed = 42;
    int threads = 1;
};

struct orbit_stat {
    std::int64_t index = 0;
    std::uint64_t seed = 0;
    std::int64_t steps = 0;  // counted steps, after burn-in
    std::int64_t hits = 0;   // switch-band visits among counted steps
    double hit_rate = 0.0;
};

struct switch_estimate {
    double estimate = 0.0;   // mean orbit hit rate
    double std_error = 0.0;  // across orbits
    mc_params params;        // with burn_in resolved
    std::vector<orbit_stat> orbit_stats;
};

// Long-run fraction of time spent in the switch band, estimated over
// independent orbits.  Runs in plain doubles for every backend: exact orbit
// coordinates grow without bound along a generic trajectory, and the region
// tests here need no tolerance, only a fixed tie-break at the boundary.
// Results are identical for any thread count: orbit i depends only on
// derive_seed(seed, i), and aggregation runs in index order.
template <numeric_backend B>
switch_estimate estimate_switch_measure(const beta_param<B>& param, const mc_params& mc) {
    mc_params cfg = mc;
    if (cfg.burn_in < 0) cfg.burn_in = cfg.steps / 10;
    if (cfg.orbits < 2) throw invalid_params_error("need at least two orbits");
    if (cfg.steps < 1 || cfg.burn_in >= cfg.steps)
        throw invalid_params_error("need steps > burn_in >= 0");
    if (cfg.threads < 1) throw invalid_params_error("thread count must be positive");

    const double beta = param.beta_double();
    const double right = param.backend().to_double(param.interval_right());
    const double lo = param.backend().to_double(param.switch_lo());
    const double hi = param.backend().to_double(param.switch_hi());

    switch_estimate est;
    est.params = cfg;
    est.orbit_stats.resize(static_cast<std::size_t>(cfg.orbits));

    auto run_range = [&](std::int64_t begin, std::int64_t end) {
        for (std::int64_t i = begin; i < end; ++i) {
            const std::uint64_t s = derive_seed(cfg.seed, static_cast<std::uint64_t>(i));
            bit_stream gen(s);
            double x = gen.next_unit() * right;
            std::int64_t hits = 0;
            std::int64_t hits_at_burn = 0;
            for (std::int64_t t = 1; t <= cfg.steps; ++t) {
                if (x < lo) {
                    x = beta * x;
                } else if (x <= hi) {
                    ++hits;
                    x = beta * x - gen.next_bit();
                } else {
                    x = beta * x - 1.0;
                }
                if (t == cfg.burn_in) hits_at_burn = hits;
            }
            const std::int64_t counted = cfg.steps - cfg.burn_in;
            const std::int64_t h = hits - hits_at_burn;
            est.orbit_stats[static_cast<std::size_t>(i)] = {
                i, s, counted, h, static_cast<double>(h) / static_cast<double>(counted)};
        }
    };

    if (cfg.threads == 1) {
        run_range(0, cfg.orbits);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(cfg.threads));
        const std::int64_t chunk = (cfg.orbits + cfg.threads - 1) / cfg.threads;
        for (int t = 0; t < cfg.threads; ++t) {
            const std::int64_t begin = t * chunk;
            const std::int64_t end = std::min<std::int64_t>(begin + chunk, cfg.orbits);
            if (begin >= end) break;
            pool.emplace_back(run_range, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    double mean = 0.0;
    double comp = 0.0;
    for (const auto& o : est.orbit_stats) {
        const double y = o.hit_rate - comp;
        const double t = mean + y;
        comp = (t - mean) - y;
        mean = t;
    }
    mean /= static_cast<double>(cfg.orbits);
    double ss = 0.0;
    comp = 0.0;
    for (const auto& o : est.orbit_stats) {
        const double d = o.hit_rate - mean;
        const double y = d * d - comp;
        const double t = ss + y;
        comp = (t - ss) - y;
        ss = t;
    }
    const double k = static_cast<double>(cfg.orbits);
    est.estimate = mean;
    est.std_error = std::sqrt(ss / (k - 1.0) / k);
    return est;
}

struct growth_bound {
    double value = 0.0;      // ln(2) * switch-band measure estimate
    double std_error = 0.0;
};

template <numeric_backend B>
growth_bound growth_bound_estimate(const beta_param<B>& param, const mc_params& mc) {
    const switch_estimate est = estimate_switch_measure(param, mc);
    const double ln2 = std::log(2.0);
    return {ln2 * est.estimate, ln2 * est.std_error};
}

struct bound_sample {
    double x = 0.0;
    double log_rate = 0.0;  // ln(count)/depth at the test depth
    double margin = 0.0;    // log_rate - (bound - slack)
    bool satisfied = false;
};

struct bound_report {
    int depth = 0;
    double slack = 0.0;
    std::uint64_t seed = 0;
    growth_bound bound;
    std::vector<bound_sample> samples;
    double fraction_satisfied = 0.0;
};

// Spot check: the simulated growth bound should be (close to) a lower bound
// for the observed per-digit growth of prefix counts at random points.
template <numeric_backend B>
bound_report bound_check(const beta_param<B>& param, int sample_count, int depth,
                         const mc_params& mc, double slack, const caps& limits = {}) {
    if (sample_count < 1) throw invalid_params_error("need at least one sample");
    if (!(slack >= 0.0)) throw invalid_params_error("slack must be nonnegative");

    bound_report rep;
    rep.depth = depth;
    rep.slack = slack;
    rep.seed = mc.seed;
    rep.bound = growth_bound_estimate(param, mc);

    const auto& bk = param.backend();
    const std::uint64_t sample_root = mc.seed ^ 0x626F756E64ull;
    std::int64_t satisfied = 0;
    rep.samples.reserve(static_cast<std::size_t>(sample_count));
    for (int i = 0; i < sample_count; ++i) {
        const std::uint64_t bits = derive_seed(sample_root, static_cast<std::uint64_t>(i)) >> 11;
        const auto u = bk.from_ratio(static_cast<long long>(bits), 1ll << 53);
        const auto x = bk.mul(param.interval_right(), u);
        const count_result r = count_prefixes(param, x, depth, limits);
        bound_sample s;
        s.x = bk.to_double(x);
        s.log_rate = r.log_rate;
        s.margin = r.log_rate - (rep.bound.value - slack);
        s.satisfied = s.margin >= 0.0;
        if (s.satisfied) ++satisfied;
        rep.samples.push_back(s);
    }
    rep.fraction_satisfied = static_cast<double>(satisfied) / sample_count;
    return rep;
}

} // namespace betaexp
