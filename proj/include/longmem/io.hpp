// CSV and binary interchange.  Doubles are written with std::to_chars
// (shortest round-trip form), so output is locale-independent and
// byte-stable across runs and worker counts.
#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "longmem/gaussian_sim.hpp"
#include "longmem/montecarlo.hpp"
#include "longmem/noise_models.hpp"

namespace longmem {

inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline void write_series_csv(std::ostream& os, const Series& s) {
    os << "t,value\n";
    for (std::size_t t = 0; t < s.values.size(); ++t)
        os << (t + 1) << ',' << format_double(s.values[t]) << '\n';
}

/// Little-endian 64-bit count followed by raw little-endian doubles.
inline void write_series_binary(std::ostream& os, const Series& s) {
    const std::uint64_t n = s.values.size();
    os.write(reinterpret_cast<const char*>(&n), sizeof(n));
    os.write(reinterpret_cast<const char*>(s.values.data()),
             static_cast<std::streamsize>(n * sizeof(double)));
}

inline std::vector<double> read_series_binary(std::istream& is) {
    std::uint64_t n = 0;
    is.read(reinterpret_cast<char*>(&n), sizeof(n));
    if (!is) throw std::runtime_error("binary series: truncated header");
    std::vector<double> out(n);
    is.read(reinterpret_cast<char*>(out.data()), static_cast<std::streamsize>(n * sizeof(double)));
    if (!is) throw std::runtime_error("binary series: truncated payload");
    return out;
}

/// Values from a CSV path: accepts "t,value" rows (header optional) or one
/// value per line.
inline std::vector<double> read_values_csv(std::istream& is) {
    std::vector<double> out;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        const std::string field = comma == std::string::npos ? line : line.substr(comma + 1);
        try {
            std::size_t used = 0;
            const double v = std::stod(field, &used);
            out.push_back(v);
        } catch (const std::exception&) {
            if (out.empty()) continue; // header row
            throw std::runtime_error("csv: unparsable value: " + field);
        }
    }
    return out;
}

inline void write_cov_csv(std::ostream& os, const CovarianceModel& model, std::size_t K) {
    const std::vector<double> r = model.cov_sequence(K);
    os << "lag,value\n";
    for (std::size_t k = 0; k < r.size(); ++k)
        os << k << ',' << format_double(r[k]) << '\n';
}

inline void write_f_table_csv(std::ostream& os,
                              const std::vector<std::pair<double, double>>& table) {
    os << "theta,f\n";
    for (const auto& [t, f] : table)
        os << format_double(t) << ',' << format_double(f) << '\n';
}

inline void write_replications_csv(std::ostream& os, const McSummary& s) {
    os << "rep,theta_hat,alpha_hat,s2,g1,g2,clamped\n";
    for (const Replication& r : s.replications)
        os << r.rep << ',' << format_double(r.theta_hat) << ',' << format_double(r.alpha_hat)
           << ',' << format_double(r.s2) << ',' << format_double(r.g1) << ','
           << format_double(r.g2) << ',' << (r.clamped ? 1 : 0) << '\n';
}

inline void write_grid_csv(std::ostream& os, const Grid2d& g) {
    const double wx = (g.xmax - g.xmin) / static_cast<double>(g.bins);
    const double wy = (g.ymax - g.ymin) / static_cast<double>(g.bins);
    os << "x_center,y_center,count\n";
    for (std::size_t iy = 0; iy < g.bins; ++iy)
        for (std::size_t ix = 0; ix < g.bins; ++ix)
            os << format_double(g.xmin + (static_cast<double>(ix) + 0.5) * wx) << ','
               << format_double(g.ymin + (static_cast<double>(iy) + 0.5) * wy) << ','
               << g.counts[iy * g.bins + ix] << '\n';
}

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << "n,mae_theta,mae_alpha\n";
    for (const SweepRow& r : rows)
        os << r.n << ',' << format_double(r.mae_theta) << ',' << format_double(r.mae_alpha)
           << '\n';
}

inline void write_mc_summary(std::ostream& os, const McSummary& s) {
    auto moments = [&](const char* name, const Moments& m, double ks) {
        os << name << "_mean=" << format_double(m.mean) << '\n'
           << name << "_var=" << format_double(m.var) << '\n'
           << name << "_skew=" << format_double(m.skew) << '\n'
           << name << "_ex_kurtosis=" << format_double(m.ex_kurtosis) << '\n'
           << name << "_ks=" << format_double(ks) << '\n';
    };
    os << s.config.model.describe() << '\n'
       << "theta=" << format_double(s.config.theta) << '\n'
       << "alpha=" << format_double(s.config.alpha) << '\n'
       << "n=" << s.config.n << '\n'
       << "reps=" << s.config.reps << '\n'
       << "seed=" << s.config.master_seed << '\n'
       << "h_eff=" << format_double(s.h_eff) << '\n'
       << "f_theta=" << format_double(s.f_theta) << '\n'
       << "f_prime=" << format_double(s.f_prime) << '\n'
       << "sigma_h=" << format_double(s.sigma_h) << '\n'
       << "sigma1_eff=" << format_double(s.sigma1_eff) << '\n'
       << "clamp_count=" << s.clamp_count << '\n';
    moments("g1", s.g1_moments, s.ks_g1);
    moments("g1_theta", s.g1_theta_moments, s.ks_g1_theta);
    moments("g2", s.g2_moments, s.ks_g2);
    os << "cross_corr=" << format_double(s.cross_corr) << '\n'
       << "runtime_seconds=" << format_double(s.runtime_seconds) << '\n';
}

inline void write_file(const std::string& path, const std::string& contents) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << contents;
}

} // namespace longmem
