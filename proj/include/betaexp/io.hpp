#pragma once

#include "counting.hpp"
#include "density.hpp"
#include "garsia.hpp"
#include "random_beta.hpp"

#include <cstdio>
#include <ostream>
#include <string>
#include <type_traits>

namespace betaexp {

// Shortest round-trip decimal via %.17g unless the caller narrows it.
// All CSV output funnels through here so identical runs emit identical bytes.
inline std::string fmt_double(double v, int precision = 17) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    return std::string(buf);
}

namespace detail {

inline void append_exact_columns(std::string& line, const quad_value& v) {
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    line += ',';
    line += numerator(v.p).str();
    line += ',';
    line += denominator(v.p).str();
    line += ',';
    line += numerator(v.q).str();
    line += ',';
    line += denominator(v.q).str();
}

} // namespace detail

// Columns: left,right,value.  With exact_columns (quadratic backend only)
// each of the three gains p_num,p_den,q_num,q_den coordinate columns.
template <numeric_backend B>
void write_density_csv(std::ostream& os, const beta_param<B>& param,
                       const piecewise_constant<B>& f, int precision = 17,
                       bool exact_columns = false) {
    const auto& bk = param.backend();
    constexpr bool is_quad = std::is_same_v<typename B::scalar, quad_value>;
    if (exact_columns && !is_quad)
        throw invalid_params_error("exact columns require the quadratic backend");

    std::string header = "left,right,value";
    if (exact_columns) {
        for (const char* c : {"left", "right", "value"}) {
            header += ',';
            header += c;
            header += "_p_num,";
            header += c;
            header += "_p_den,";
            header += c;
            header += "_q_num,";
            header += c;
            header += "_q_den";
        }
    }
    os << header << '\n';

    for (std::size_t i = 0; i < f.values.size(); ++i) {
        std::string line = fmt_double(bk.to_double(f.breaks[i]), precision);
        line += ',';
        line += fmt_double(bk.to_double(f.breaks[i + 1]), precision);
        line += ',';
        line += fmt_double(bk.to_double(f.values[i]), precision);
        if constexpr (is_quad) {
            if (exact_columns) {
                detail::append_exact_columns(line, f.breaks[i]);
                detail::append_exact_columns(line, f.breaks[i + 1]);
                detail::append_exact_columns(line, f.values[i]);
            }
        }
        os << line << '\n';
    }
}

// Columns: atom,mass_num,mass_den with masses in lowest terms.
template <numeric_backend B>
void write_measure_csv(std::ostream& os, const beta_param<B>& param, const discrete_measure<B>& m,
                       int precision = 17) {
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    const auto& bk = param.backend();
    os << "atom,mass_num,mass_den\n";
    for (std::size_t i = 0; i < m.size(); ++i) {
        const Rat mass = m.mass(i);
        os << fmt_double(bk.to_double(m.atoms[i]), precision) << ',' << numerator(mass).str()
           << ',' << denominator(mass).str() << '\n';
    }
}

inline void write_entropy_csv(std::ostream& os, const std::vector<garsia_row>& rows,
                              int precision = 17) {
    os << "n,H,H_over_n,ln_beta\n";
    for (const auto& r : rows) {
        os << r.depth << ',' << fmt_double(r.entropy_nats, precision) << ','
           << fmt_double(r.ratio, precision) << ',' << fmt_double(r.log_beta, precision) << '\n';
    }
}

inline void write_growth_csv(std::ostream& os, const std::vector<count_result>& levels,
                             int precision = 17) {
    os << "n,count,f_n,garsia_erdos,log_rate,boundary_sensitive\n";
    for (const auto& r : levels) {
        os << r.depth << ',' << r.count.str() << ',' << fmt_double(r.f_value, precision) << ','
           << fmt_double(r.garsia_erdos, precision) << ',' << fmt_double(r.log_rate, precision)
           << ',' << (r.boundary_sensitive ? 1 : 0) << '\n';
    }
}

// Per-orbit rows, then a one-row summary block.
inline void write_simulation_csv(std::ostream& os, const switch_estimate& est,
                                 int precision = 17) {
    os << "orbit,seed,steps,hits,hit_rate\n";
    for (const auto& o : est.orbit_stats) {
        os << o.index << ',' << o.seed << ',' << o.steps << ',' << o.hits << ','
           << fmt_double(o.hit_rate, precision) << '\n';
    }
    const double ln2 = std::log(2.0);
    os << "mu_S_estimate,std_error,c_beta\n";
    os << fmt_double(est.estimate, precision) << ',' << fmt_double(est.std_error, precision)
       << ',' << fmt_double(ln2 * est.estimate, precision) << '\n';
}

inline void write_bound_csv(std::ostream& os, const bound_report& rep, int precision = 17) {
    os << "x,log_rate,margin,satisfied\n";
    for (const auto& s : rep.samples) {
        os << fmt_double(s.x, precision) << ',' << fmt_double(s.log_rate, precision) << ','
           << fmt_double(s.margin, precision) << ',' << (s.satisfied ? 1 : 0) << '\n';
    }
    os << "c_beta,c_std_error,slack,depth,seed,fraction_satisfied\n";
    os << fmt_double(rep.bound.value, precision) << ',' << fmt_double(rep.bound.std_error, precision)
       << ',' << fmt_double(rep.slack, precision) << ',' << rep.depth << ',' << rep.seed << ','
       << fmt_double(rep.fraction_satisfied, precision) << '\n';
}

// Long format: one row per (sample, depth), then a summary block.
inline void write_convergence_csv(std::ostream& os, const convergence_report& rep,
                                  int precision = 17) {
    os << "sample,x,n,f_n\n";
    for (std::size_t s = 0; s < rep.samples.size(); ++s) {
        const auto& d = rep.samples[s];
        for (std::size_t i = 0; i < d.f_curve.size(); ++i) {
            os << s << ',' << fmt_double(d.x, precision) << ',' << (i + 1) << ','
               << fmt_double(d.f_curve[i], precision) << '\n';
        }
    }
    os << "tail_begin,mean_oscillation,median_oscillation,max_oscillation\n";
    os << rep.tail_begin << ',' << fmt_double(rep.mean_oscillation, precision) << ','
       << fmt_double(rep.median_oscillation, precision) << ','
       << fmt_double(rep.max_oscillation, precision) << '\n';
}

} // namespace betaexp
