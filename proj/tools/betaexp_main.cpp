// Command-line front end.  Every subcommand parses flags, builds the base
// parameters, calls one library entry point and prints its results; no
// numeric logic lives here.

#include <betaexp/betaexp.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using namespace betaexp;

// ---- shared flag bundles ----------------------------------------------

struct base_options {
    std::optional<double> beta;
    std::optional<std::string> beta_quad;  // "a,b"
    double tolerance = 1e-10;
};

struct point_options {
    std::string x = "0";
    std::string x_beta = "0";  // coefficient of beta, exact mode mostly
};

struct output_options {
    std::string out_path;
    std::string format = "pretty";  // or "csv" on stdout
    int precision = 17;
};

void add_base_flags(CLI::App* cmd, base_options& o) {
    cmd->add_option("--beta", o.beta, "base as a decimal in (1,2); float backend");
    cmd->add_option("--beta-quad", o.beta_quad,
                    "base as 'a,b', the positive root of x^2 = a*x + b; exact backend");
    cmd->add_option("--tol", o.tolerance, "comparison tolerance for the float backend");
}

void add_point_flags(CLI::App* cmd, point_options& o) {
    cmd->add_option("--x", o.x, "point: decimal or num/den");
    cmd->add_option("--x-beta", o.x_beta, "beta coefficient of the point: decimal or num/den");
}

void add_output_flags(CLI::App* cmd, output_options& o) {
    cmd->add_option("--out", o.out_path, "write CSV to this file");
    cmd->add_option("--format", o.format, "stdout format: pretty or csv")
        ->check(CLI::IsMember({"pretty", "csv"}));
    cmd->add_option("--precision", o.precision, "significant digits in CSV numbers")
        ->check(CLI::Range(1, 17));
}

caps caps_from_env() {
    caps c;
    auto read_int = [](const char* name, auto& slot) {
        if (const char* v = std::getenv(name)) slot = static_cast<std::decay_t<decltype(slot)>>(std::strtoll(v, nullptr, 10));
    };
    read_int("BETAEXP_DEPTH_CAP", c.depth_cap);
    read_int("BETAEXP_ORACLE_CAP", c.oracle_depth_cap);
    read_int("BETAEXP_MEASURE_CAP", c.measure_depth_cap);
    read_int("BETAEXP_ENUM_CAP", c.enum_cap);
    read_int("BETAEXP_PIECE_BUDGET", c.piece_budget);
    return c;
}

// ---- value parsing -----------------------------------------------------

Rat parse_rat(const std::string& text) {
    if (text.empty()) throw invalid_params_error("empty number");
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
        const std::string num = text.substr(0, slash);
        const std::string den = text.substr(slash + 1);
        if (num.empty() || den.empty()) throw invalid_params_error("malformed fraction: " + text);
        Int n(num), d(den);
        if (d.sign() == 0) throw invalid_params_error("zero denominator: " + text);
        return Rat(n, d);
    }
    // Plain decimal: optional sign, digits, optional fractional part.
    std::string s = text;
    bool negative = false;
    if (s.front() == '+' || s.front() == '-') {
        negative = s.front() == '-';
        s.erase(s.begin());
    }
    const auto dot = s.find('.');
    std::string digits = dot == std::string::npos ? s : s.substr(0, dot) + s.substr(dot + 1);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
        throw invalid_params_error("malformed number: " + text);
    Int num(digits);
    Int den = 1;
    if (dot != std::string::npos)
        for (std::size_t i = dot + 1; i < s.size(); ++i) den *= 10;
    Rat r(num, den);
    return negative ? Rat(-r) : r;
}

template <class B>
typename B::scalar parse_point(const beta_param<B>& param, const point_options& o) {
    const Rat xr = parse_rat(o.x);
    const Rat xb = parse_rat(o.x_beta);
    const auto& bk = param.backend();
    return bk.add(bk.from_rat(xr), bk.mul(bk.from_rat(xb), param.beta()));
}

// ---- output plumbing ----------------------------------------------------

// Runs `writer` against the file from --out and/or stdout when --format csv.
template <class W>
void emit_csv(const output_options& o, W&& writer) {
    if (!o.out_path.empty()) {
        std::ofstream file(o.out_path, std::ios::binary);
        if (!file) throw invalid_params_error("cannot open output file: " + o.out_path);
        writer(file);
    }
    if (o.format == "csv") writer(std::cout);
}

std::string fmt(double v) { return fmt_double(v, 17); }

// ---- subcommand bodies ---------------------------------------------------

template <class B>
int run_count(const beta_param<B>& param, const point_options& po, int n,
              const output_options& oo, const caps& limits) {
    const auto x = parse_point(param, po);
    const count_result r = count_prefixes(param, x, n, limits);
    emit_csv(oo, [&](std::ostream& os) {
        write_growth_csv(os, std::vector<count_result>{r}, oo.precision);
    });
    if (oo.format == "pretty")
        std::cout << "N=" << r.count.str() << "\n"
                  << "f_n=" << fmt(r.f_value) << "\n"
                  << "garsia_erdos=" << fmt(r.garsia_erdos) << "\n"
                  << "log_rate=" << fmt(r.log_rate) << "\n"
                  << "boundary_sensitive=" << (r.boundary_sensitive ? 1 : 0) << "\n";
    return 0;
}

template <class B>
int run_growth(const beta_param<B>& param, const point_options& po, int n_max,
               const output_options& oo, const caps& limits) {
    const auto x = parse_point(param, po);
    const growth_report rep = growth_sequence(param, x, n_max, limits);
    emit_csv(oo, [&](std::ostream& os) { write_growth_csv(os, rep.levels, oo.precision); });
    if (oo.format == "pretty")
        std::cout << "n_max=" << n_max << "\n"
                  << "final_count=" << rep.levels.back().count.str() << "\n"
                  << "max_garsia_erdos=" << fmt(rep.max_garsia_erdos) << "\n"
                  << "tail_begin=" << rep.tail_begin << "\n"
                  << "tail_f_min=" << fmt(rep.tail_f_min) << "\n"
                  << "tail_f_max=" << fmt(rep.tail_f_max) << "\n";
    return 0;
}

template <class B>
int run_density(const beta_param<B>& param, int n, bool raw, bool exact_columns,
                const output_options& oo, const caps& limits) {
    const piecewise_constant<B> f =
        raw ? level_density(param, n, limits) : density_estimate(param, n, limits);
    emit_csv(oo, [&](std::ostream& os) {
        write_density_csv(os, param, f, oo.precision, exact_columns);
    });
    if (oo.format == "pretty")
        std::cout << "n=" << n << "\n"
                  << "pieces=" << f.piece_count() << "\n"
                  << "integral=" << fmt(param.backend().to_double(integral(param, f))) << "\n";
    return 0;
}

template <class B>
int run_entropy(const beta_param<B>& param, int n_max, const std::string& measure_out,
                const output_options& oo, const caps& limits) {
    const auto rows = garsia_ratios(param, n_max, limits);
    emit_csv(oo, [&](std::ostream& os) { write_entropy_csv(os, rows, oo.precision); });
    if (!measure_out.empty()) {
        const auto m = level_measure(param, n_max, limits);
        std::ofstream file(measure_out, std::ios::binary);
        if (!file) throw invalid_params_error("cannot open output file: " + measure_out);
        write_measure_csv(file, param, m, oo.precision);
        if (oo.format == "pretty")
            std::cout << "measure_atoms=" << m.size() << "\n"
                      << "suspicious_merge=" << (m.suspicious_merge ? 1 : 0) << "\n";
    }
    if (oo.format == "pretty") {
        for (const auto& r : rows)
            std::cout << "n=" << r.depth << " H=" << fmt(r.entropy_nats)
                      << " H_over_n=" << fmt(r.ratio) << "\n";
        std::cout << "ln_beta=" << fmt(std::log(param.beta_double())) << "\n"
                  << "final_ratio=" << fmt(rows.back().ratio) << "\n";
    }
    return 0;
}

template <class B>
int run_simulate(const beta_param<B>& param, const mc_params& mc, const output_options& oo) {
    const switch_estimate est = estimate_switch_measure(param, mc);
    emit_csv(oo, [&](std::ostream& os) { write_simulation_csv(os, est, oo.precision); });
    if (oo.format == "pretty")
        std::cout << "orbits=" << est.params.orbits << "\n"
                  << "steps=" << est.params.steps << "\n"
                  << "burn_in=" << est.params.burn_in << "\n"
                  << "seed=" << est.params.seed << "\n"
                  << "mu_S_estimate=" << fmt(est.estimate) << "\n"
                  << "std_error=" << fmt(est.std_error) << "\n"
                  << "c_beta=" << fmt(std::log(2.0) * est.estimate) << "\n";
    return 0;
}

template <class B>
int run_bound(const beta_param<B>& param, int samples, int depth, double slack,
              const mc_params& mc, const output_options& oo, const caps& limits) {
    const bound_report rep = bound_check(param, samples, depth, mc, slack, limits);
    emit_csv(oo, [&](std::ostream& os) { write_bound_csv(os, rep, oo.precision); });
    if (oo.format == "pretty") {
        double min_margin = rep.samples.front().margin;
        for (const auto& s : rep.samples) min_margin = std::min(min_margin, s.margin);
        std::cout << "c_beta=" << fmt(rep.bound.value) << "\n"
                  << "c_std_error=" << fmt(rep.bound.std_error) << "\n"
                  << "depth=" << rep.depth << "\n"
                  << "slack=" << fmt(rep.slack) << "\n"
                  << "seed=" << rep.seed << "\n"
                  << "samples=" << rep.samples.size() << "\n"
                  << "min_margin=" << fmt(min_margin) << "\n"
                  << "fraction_satisfied=" << fmt(rep.fraction_satisfied) << "\n";
    }
    return 0;
}

template <class B>
int run_diagnose(const beta_param<B>& param, int samples, int n_max, double window_frac,
                 std::uint64_t seed, const output_options& oo, const caps& limits) {
    const auto& bk = param.backend();
    std::vector<typename B::scalar> points;
    points.reserve(static_cast<std::size_t>(samples));
    const std::uint64_t root = seed ^ 0x64696167ull;
    for (int i = 0; i < samples; ++i) {
        const std::uint64_t bits = derive_seed(root, static_cast<std::uint64_t>(i)) >> 11;
        const auto u = bk.from_ratio(static_cast<long long>(bits), 1ll << 53);
        points.push_back(bk.mul(param.interval_right(), u));
    }
    const convergence_report rep = convergence_diagnostic(param, points, n_max, window_frac, limits);
    emit_csv(oo, [&](std::ostream& os) { write_convergence_csv(os, rep, oo.precision); });
    if (oo.format == "pretty")
        std::cout << "samples=" << samples << "\n"
                  << "n_max=" << rep.n_max << "\n"
                  << "seed=" << seed << "\n"
                  << "tail_begin=" << rep.tail_begin << "\n"
                  << "mean_oscillation=" << fmt(rep.mean_oscillation) << "\n"
                  << "median_oscillation=" << fmt(rep.median_oscillation) << "\n"
                  << "max_oscillation=" << fmt(rep.max_oscillation) << "\n";
    return 0;
}

// Builds the requested backend and forwards to fn(param).
template <class F>
int dispatch(const base_options& bo, F&& fn) {
    const bool has_float = bo.beta.has_value();
    const bool has_quad = bo.beta_quad.has_value();
    if (has_float == has_quad) {
        std::cerr << "error: exactly one of --beta or --beta-quad is required\n";
        return 2;
    }
    if (has_quad) {
        long long a = 0, b = 0;
        char comma = 0;
        std::istringstream in(*bo.beta_quad);
        if (!(in >> a >> comma >> b) || comma != ',' || !(in >> std::ws).eof()) {
            std::cerr << "error: --beta-quad expects 'a,b'\n";
            return 2;
        }
        return fn(make_quadratic_beta(a, b));
    }
    return fn(make_float_beta(*bo.beta, bo.tolerance));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"prefix counts, densities, level measures and random dynamics for "
                 "binary beta-expansions"};
    app.require_subcommand(1);
    app.footer("Caps honor BETAEXP_DEPTH_CAP, BETAEXP_ORACLE_CAP, BETAEXP_MEASURE_CAP,\n"
               "BETAEXP_ENUM_CAP and BETAEXP_PIECE_BUDGET environment overrides.");

    base_options bo;
    point_options po;
    output_options oo;
    int n = 0;
    int n_max = 10;
    int samples = 20;
    double window_frac = 0.5;
    double slack = 0.05;
    bool raw = false;
    bool exact_columns = false;
    std::string measure_out;
    mc_params mc;

    auto* c_count = app.add_subcommand("count", "count admissible digit words at a point");
    add_base_flags(c_count, bo);
    add_point_flags(c_count, po);
    add_output_flags(c_count, oo);
    c_count->add_option("--n", n, "word length")->required();

    auto* c_growth = app.add_subcommand("growth", "count growth across depths 1..n-max");
    add_base_flags(c_growth, bo);
    add_point_flags(c_growth, po);
    add_output_flags(c_growth, oo);
    c_growth->add_option("--n-max", n_max, "largest depth")->required();

    auto* c_density = app.add_subcommand("density", "normalized count density at depth n");
    add_base_flags(c_density, bo);
    add_output_flags(c_density, oo);
    c_density->add_option("--n", n, "depth")->required();
    c_density->add_flag("--raw", raw, "skip the unit-mass renormalization");
    c_density->add_flag("--exact", exact_columns, "append exact coordinate columns (quadratic)");

    auto* c_entropy = app.add_subcommand("entropy", "level measure entropy per depth");
    add_base_flags(c_entropy, bo);
    add_output_flags(c_entropy, oo);
    c_entropy->add_option("--n-max", n_max, "largest depth")->required();
    c_entropy->add_option("--measure-out", measure_out, "also write the depth n-max measure CSV");

    auto* c_sim = app.add_subcommand("simulate", "estimate the switch-band measure by simulation");
    add_base_flags(c_sim, bo);
    add_output_flags(c_sim, oo);
    c_sim->add_option("--orbits", mc.orbits, "independent orbits");
    c_sim->add_option("--steps", mc.steps, "steps per orbit");
    c_sim->add_option("--burn-in", mc.burn_in, "discarded prefix steps (default steps/10)");
    c_sim->add_option("--seed", mc.seed, "root seed");
    c_sim->add_option("--threads", mc.threads, "worker threads (result is thread-count invariant)");

    auto* c_bound = app.add_subcommand("bound", "check the simulated growth bound at random points");
    add_base_flags(c_bound, bo);
    add_output_flags(c_bound, oo);
    c_bound->add_option("--samples", samples, "number of random points");
    c_bound->add_option("--n", n, "depth for the observed growth rate")->required();
    c_bound->add_option("--slack", slack, "tolerated shortfall in the bound");
    c_bound->add_option("--orbits", mc.orbits, "independent orbits");
    c_bound->add_option("--steps", mc.steps, "steps per orbit");
    c_bound->add_option("--burn-in", mc.burn_in, "discarded prefix steps (default steps/10)");
    c_bound->add_option("--seed", mc.seed, "root seed");
    c_bound->add_option("--threads", mc.threads, "worker threads");

    auto* c_diag = app.add_subcommand("diagnose", "tail oscillation of the normalized counts");
    add_base_flags(c_diag, bo);
    add_output_flags(c_diag, oo);
    c_diag->add_option("--samples", samples, "number of random points");
    c_diag->add_option("--n-max", n_max, "largest depth")->required();
    c_diag->add_option("--window-frac", window_frac, "tail window start as a fraction of n-max");
    c_diag->add_option("--seed", mc.seed, "root seed for the sample points");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const caps limits = caps_from_env();
    try {
        if (c_count->parsed())
            return dispatch(bo, [&](const auto& p) { return run_count(p, po, n, oo, limits); });
        if (c_growth->parsed())
            return dispatch(bo, [&](const auto& p) { return run_growth(p, po, n_max, oo, limits); });
        if (c_density->parsed())
            return dispatch(bo, [&](const auto& p) {
                return run_density(p, n, raw, exact_columns, oo, limits);
            });
        if (c_entropy->parsed())
            return dispatch(bo, [&](const auto& p) {
                return run_entropy(p, n_max, measure_out, oo, limits);
            });
        if (c_sim->parsed())
            return dispatch(bo, [&](const auto& p) { return run_simulate(p, mc, oo); });
        if (c_bound->parsed())
            return dispatch(bo, [&](const auto& p) {
                return run_bound(p, samples, n, slack, mc, oo, limits);
            });
        if (c_diag->parsed())
            return dispatch(bo, [&](const auto& p) {
                return run_diagnose(p, samples, n_max, window_frac, mc.seed, oo, limits);
            });
    } catch (const betaexp::error& e) {
        std::cerr << "error: " << e.name() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
