// Command-line surface: flag/config-file parsing and subcommand dispatch.
// Plain key=value configuration, no structured-format dependency.
#pragma once

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "longmem/errors.hpp"
#include "longmem/estimators.hpp"
#include "longmem/gaussian_sim.hpp"
#include "longmem/io.hpp"
#include "longmem/moment_map.hpp"
#include "longmem/montecarlo.hpp"
#include "longmem/noise_models.hpp"

namespace longmem::cli {

class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

enum class Subcommand { simulate, estimate, fmap, constants, mc, sweep, check };

inline const char* to_string(Subcommand c) {
    switch (c) {
        case Subcommand::simulate: return "simulate";
        case Subcommand::estimate: return "estimate";
        case Subcommand::fmap: return "fmap";
        case Subcommand::constants: return "constants";
        case Subcommand::mc: return "mc";
        case Subcommand::sweep: return "sweep";
        case Subcommand::check: return "check";
    }
    return "?";
}

struct RunConfig {
    Subcommand cmd = Subcommand::check;
    std::map<std::string, std::string> kv;
    bool print_config = false;

    bool operator==(const RunConfig& other) const {
        return cmd == other.cmd && kv == other.kv;
    }
};

namespace detail_cli {

inline const std::set<std::string> kModelKeys = {"model", "H", "d", "sigma", "custom_file"};
inline const std::set<std::string> kRunKeys = {"theta", "alpha",   "n",  "reps",
                                               "seed",  "workers", "tol"};

inline std::set<std::string> allowed_keys(Subcommand c) {
    std::set<std::string> keys = kModelKeys;
    keys.insert(kRunKeys.begin(), kRunKeys.end());
    switch (c) {
        case Subcommand::simulate:
            keys.insert({"out", "format", "burnin"});
            break;
        case Subcommand::estimate:
            keys.insert({"in", "out"});
            break;
        case Subcommand::fmap:
            keys.insert({"grid", "out"});
            break;
        case Subcommand::constants:
            keys.insert({"out", "cov_lags", "cov_out"});
            break;
        case Subcommand::mc:
            keys.insert({"out", "summary_out", "grid_out"});
            break;
        case Subcommand::sweep:
            keys.insert({"n_grid", "out"});
            break;
        case Subcommand::check:
            break;
    }
    return keys;
}

inline Subcommand parse_subcommand(const std::string& s) {
    if (s == "simulate") return Subcommand::simulate;
    if (s == "estimate") return Subcommand::estimate;
    if (s == "fmap") return Subcommand::fmap;
    if (s == "constants") return Subcommand::constants;
    if (s == "mc") return Subcommand::mc;
    if (s == "sweep") return Subcommand::sweep;
    if (s == "check") return Subcommand::check;
    throw config_error("unknown subcommand: " + s);
}

inline double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw config_error("");
        return x;
    } catch (const std::exception&) {
        throw config_error("invalid numeric value for " + key + ": " + v);
    }
}

inline std::uint64_t parse_uint(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const unsigned long long x = std::stoull(v, &used);
        if (used != v.size()) throw config_error("");
        return x;
    } catch (const std::exception&) {
        throw config_error("invalid integer value for " + key + ": " + v);
    }
}

} // namespace detail_cli

/// Builds a RunConfig from argv-style tokens.  Order of precedence:
/// config-file values, then command-line flags, then the LONGMEM_SEED
/// environment fallback for a missing seed.  Unknown keys are rejected.
inline RunConfig parse_config(const std::vector<std::string>& args,
                              std::optional<std::string> env_seed = std::nullopt) {
    if (args.empty()) throw config_error("missing subcommand");
    RunConfig cfg;
    cfg.cmd = detail_cli::parse_subcommand(args[0]);

    std::map<std::string, std::string> flags;
    std::optional<std::string> config_path;
    for (std::size_t i = 1; i < args.size(); ++i) {
        std::string token = args[i];
        if (token.rfind("--", 0) != 0)
            throw config_error("expected --key, got: " + token);
        token = token.substr(2);
        std::string value;
        const auto eq = token.find('=');
        if (eq != std::string::npos) {
            value = token.substr(eq + 1);
            token = token.substr(0, eq);
        } else if (token == "print-config") {
            cfg.print_config = true;
            continue;
        } else {
            if (i + 1 >= args.size()) throw config_error("missing value for --" + token);
            value = args[++i];
        }
        if (token == "config") {
            config_path = value;
        } else {
            flags[token] = value;
        }
    }

    if (config_path) {
        std::ifstream is(*config_path);
        if (!is) throw config_error("cannot open config file: " + *config_path);
        std::string line;
        while (std::getline(is, line)) {
            const auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            while (!line.empty() && (line.back() == ' ' || line.back() == '\r')) line.pop_back();
            std::size_t start = line.find_first_not_of(' ');
            if (start == std::string::npos) continue;
            line = line.substr(start);
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw config_error("config file: expected key=value, got: " + line);
            const std::string key = line.substr(0, eq);
            const std::string value = line.substr(eq + 1);
            if (key == "subcommand") {
                if (value != to_string(cfg.cmd))
                    throw config_error("config file subcommand '" + value +
                                       "' conflicts with '" + to_string(cfg.cmd) + "'");
                continue;
            }
            cfg.kv[key] = value;
        }
    }
    for (const auto& [k, v] : flags) cfg.kv[k] = v; // flags override file values

    if (!cfg.kv.count("seed") && env_seed) cfg.kv["seed"] = *env_seed;

    const auto allowed = detail_cli::allowed_keys(cfg.cmd);
    for (const auto& [k, v] : cfg.kv)
        if (!allowed.count(k))
            throw config_error(std::string("unknown key for ") + to_string(cfg.cmd) + ": " + k);
    return cfg;
}

namespace detail_cli {

inline std::string get_or(const RunConfig& cfg, const std::string& key,
                          const std::string& fallback) {
    const auto it = cfg.kv.find(key);
    return it == cfg.kv.end() ? fallback : it->second;
}

inline CovarianceModel make_model(const RunConfig& cfg) {
    const std::string kind = get_or(cfg, "model", "fgn");
    try {
        if (kind == "white")
            return CovarianceModel::white(parse_double("sigma", get_or(cfg, "sigma", "1")));
        if (kind == "fgn")
            return CovarianceModel::fgn(parse_double("H", get_or(cfg, "H", "0.58")));
        if (kind == "arfima")
            return CovarianceModel::arfima(parse_double("d", get_or(cfg, "d", "0.08")),
                                           parse_double("sigma", get_or(cfg, "sigma", "1")));
        if (kind == "custom") {
            const auto it = cfg.kv.find("custom_file");
            if (it == cfg.kv.end()) throw config_error("custom model requires custom_file=");
            std::ifstream is(it->second);
            if (!is) throw config_error("cannot open custom_file: " + it->second);
            return CovarianceModel::custom(read_values_csv(is));
        }
    } catch (const parameter_error& e) {
        throw config_error(e.what());
    }
    throw config_error("unknown model kind: " + kind);
}

struct ParsedRun {
    CovarianceModel model;
    double theta, alpha, tol;
    std::size_t n, reps;
    std::uint64_t seed;
    unsigned workers;
    std::optional<double> h_override;
};

inline ParsedRun parse_run(const RunConfig& cfg) {
    ParsedRun r{make_model(cfg),
                parse_double("theta", get_or(cfg, "theta", "0.6")),
                parse_double("alpha", get_or(cfg, "alpha", "0.4")),
                parse_double("tol", get_or(cfg, "tol", "1e-10")),
                static_cast<std::size_t>(parse_uint("n", get_or(cfg, "n", "3000"))),
                static_cast<std::size_t>(parse_uint("reps", get_or(cfg, "reps", "2000"))),
                parse_uint("seed", get_or(cfg, "seed", "1")),
                static_cast<unsigned>(parse_uint("workers", get_or(cfg, "workers", "0"))),
                std::nullopt};
    // --H names the fgn parameter; for other models it overrides the
    // memory exponent used in CLT scalings (required for custom)
    if (cfg.kv.count("H") && r.model.kind() != NoiseKind::fgn)
        r.h_override = parse_double("H", cfg.kv.at("H"));
    if (!(r.theta > 0.0 && r.theta < 1.0)) throw config_error("theta must lie in (0,1)");
    if (r.n < 2) throw config_error("n must be >= 2");
    if (r.reps < 1) throw config_error("reps must be >= 1");
    if (!(r.tol > 0.0)) throw config_error("tol must be positive");
    return r;
}

inline void emit(const RunConfig& cfg, const std::string& key, const std::string& contents,
                 std::ostream& fallback) {
    const auto it = cfg.kv.find(key);
    if (it == cfg.kv.end()) {
        fallback << contents;
        return;
    }
    write_file(it->second, contents);
}

} // namespace detail_cli

/// Machine-readable echo of the fully resolved configuration; its output
/// re-parses to an identical RunConfig through --config.
inline void print_config(const RunConfig& cfg, std::ostream& os) {
    os << "subcommand=" << to_string(cfg.cmd) << '\n';
    for (const auto& [k, v] : cfg.kv) os << k << '=' << v << '\n';
}

inline int run_check(std::ostream& os); // defined below

/// Executes a parsed configuration.  Exit codes: 0 success, 2 config
/// error, 3 model error (non-embeddable covariance), 4 clamped estimate.
inline int dispatch(const RunConfig& cfg, std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
    using namespace detail_cli;
    try {
        if (cfg.print_config) {
            print_config(cfg, out);
            return 0;
        }
        switch (cfg.cmd) {
            case Subcommand::simulate: {
                const ParsedRun r = parse_run(cfg);
                const std::size_t burnin =
                    static_cast<std::size_t>(parse_uint("burnin", get_or(cfg, "burnin", "0")));
                const Series s = simulate_ar1(r.model, r.theta, r.alpha, r.n,
                                              SeedSpec{r.seed, 0}, burnin);
                const std::string format = get_or(cfg, "format", "csv");
                std::ostringstream buf;
                if (format == "csv") {
                    write_series_csv(buf, s);
                } else if (format == "binary") {
                    write_series_binary(buf, s);
                } else {
                    throw config_error("format must be csv or binary");
                }
                emit(cfg, "out", buf.str(), out);
                return 0;
            }
            case Subcommand::estimate: {
                const auto it = cfg.kv.find("in");
                if (it == cfg.kv.end()) throw config_error("estimate requires in=");
                std::ifstream is(it->second);
                if (!is) throw config_error("cannot open input: " + it->second);
                const std::vector<double> values = read_values_csv(is);
                const ParsedRun r = parse_run(cfg);
                const MomentMap map(r.model, r.tol);
                const EstimationResult e = estimate(map, values);
                std::ostringstream buf;
                buf << "theta_hat=" << format_double(e.theta_hat) << '\n'
                    << "alpha_hat=" << format_double(e.alpha_hat) << '\n'
                    << "x_bar=" << format_double(e.x_bar) << '\n'
                    << "s2=" << format_double(e.s2) << '\n'
                    << "clamped=" << (e.clamped ? 1 : 0) << '\n'
                    << "n=" << e.n << '\n';
                emit(cfg, "out", buf.str(), out);
                return e.clamped ? 4 : 0;
            }
            case Subcommand::fmap: {
                const ParsedRun r = parse_run(cfg);
                const std::string spec = get_or(cfg, "grid", "0.01:0.99:0.01");
                double lo = 0, hi = 0, step = 0;
                {
                    std::istringstream gs(spec);
                    std::string a, b, c;
                    if (!std::getline(gs, a, ':') || !std::getline(gs, b, ':') ||
                        !std::getline(gs, c))
                        throw config_error("grid must be lo:hi:step");
                    lo = parse_double("grid", a);
                    hi = parse_double("grid", b);
                    step = parse_double("grid", c);
                }
                if (!(step > 0.0 && lo < hi)) throw config_error("grid must be lo:hi:step ascending");
                std::vector<double> grid;
                for (double t = lo; t <= hi + 1e-12; t += step) grid.push_back(t);
                const MomentMap map(r.model, r.tol);
                std::ostringstream buf;
                write_f_table_csv(buf, map.tabulate_f(grid));
                emit(cfg, "out", buf.str(), out);
                return 0;
            }
            case Subcommand::constants: {
                const ParsedRun r = parse_run(cfg);
                const double h = r.h_override ? *r.h_override : r.model.h_effective();
                if (r.model.long_memory() && spectral_near_boundary(
                        r.model.kind() == NoiseKind::fgn ? r.model.hurst() : h))
                    err << "warning: H close to 1/2, spectral constant near its pole\n";
                const MomentMap map(r.model, r.tol);
                const VarianceConstants v = variance_constants(map, r.theta, h);
                std::ostringstream buf;
                buf << r.model.describe() << '\n'
                    << "theta=" << format_double(r.theta) << '\n'
                    << "H=" << format_double(h) << '\n'
                    << "f=" << format_double(v.f) << '\n'
                    << "f_prime=" << format_double(v.f_prime) << '\n'
                    << "sigma_H_sq=" << format_double(v.sigma_h_sq) << '\n'
                    << "sigma_1_sq=" << format_double(v.sigma_1_sq) << '\n'
                    << "sigma1_sq_effective=" << format_double(v.sigma1_sq_effective) << '\n'
                    << "c_cov=" << format_double(v.c_cov) << '\n'
                    << "c_spec=" << format_double(v.c_spec) << '\n'
                    << "l_infty=" << format_double(v.l_inf) << '\n'
                    << "hypothesis_C=" << format_double(v.hypothesis_c) << '\n';
                emit(cfg, "out", buf.str(), out);
                if (cfg.kv.count("cov_out")) {
                    const std::size_t lags = static_cast<std::size_t>(
                        parse_uint("cov_lags", get_or(cfg, "cov_lags", "100")));
                    std::ostringstream cov;
                    write_cov_csv(cov, r.model, lags);
                    write_file(cfg.kv.at("cov_out"), cov.str());
                }
                return 0;
            }
            case Subcommand::mc: {
                const ParsedRun r = parse_run(cfg);
                McConfig mc{r.model, r.theta, r.alpha, r.n,     r.reps,
                            r.seed,  r.workers, r.tol,  r.h_override};
                const McSummary s = run_mc(mc);
                if (cfg.kv.count("out")) {
                    std::ostringstream buf;
                    write_replications_csv(buf, s);
                    write_file(cfg.kv.at("out"), buf.str());
                }
                if (cfg.kv.count("grid_out") && s.grid.bins > 0) {
                    std::ostringstream buf;
                    write_grid_csv(buf, s.grid);
                    write_file(cfg.kv.at("grid_out"), buf.str());
                }
                std::ostringstream buf;
                write_mc_summary(buf, s);
                emit(cfg, "summary_out", buf.str(), out);
                return 0;
            }
            case Subcommand::sweep: {
                const ParsedRun r = parse_run(cfg);
                const std::string spec = get_or(cfg, "n_grid", "500,2000,8000");
                std::vector<std::size_t> grid;
                std::istringstream gs(spec);
                std::string tok;
                while (std::getline(gs, tok, ','))
                    grid.push_back(static_cast<std::size_t>(parse_uint("n_grid", tok)));
                McConfig mc{r.model, r.theta, r.alpha, r.n,     r.reps,
                            r.seed,  r.workers, r.tol,  r.h_override};
                std::ostringstream buf;
                write_sweep_csv(buf, consistency_sweep(mc, grid));
                emit(cfg, "out", buf.str(), out);
                return 0;
            }
            case Subcommand::check:
                return run_check(out);
        }
    } catch (const config_error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const parameter_error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const insufficient_data_error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const embedding_error& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    }
    return 2;
}

/// Quick self-check battery over the library's closed forms and
/// identities; nonzero exit on any failure.
inline int run_check(std::ostream& os) {
    int failures = 0;
    auto check = [&](const char* name, bool ok) {
        os << (ok ? "ok   " : "FAIL ") << name << '\n';
        if (!ok) ++failures;
    };
    auto near = [](double a, double b, double tol) { return std::abs(a - b) <= tol; };

    {
        const MomentMap white(CovarianceModel::white());
        check("white f(0.6) = 1/(1-0.36)", near(white.f_value(0.6), 1.5625, 1e-12));
        check("white f'(0.6) = 2*0.6/0.64^2",
              near(white.f_derivative(0.6), 2.9296875, 1e-10));
        check("white R_Y(2) = 0.36/0.64", near(white.r_y(0.6, 2), 0.5625, 1e-12));
        check("white sigma_H^2 = 2(1+0.36)/0.64^3",
              near(white.sigma_h_sq(0.6, 0.6), 10.3759765625, 1e-9));
        check("white f_inverse(1.5625) = 0.6",
              near(white.f_inverse(1.5625).theta, 0.6, 1e-8));
    }
    {
        check("sigma_1^2(3/4) = 8/3", near(sigma_1_sq(0.75), 8.0 / 3.0, 1e-10));
        check("C_H(3/4) = 1/sqrt(2 pi)",
              near(spectral_constant(0.75), 0.3989422804014327, 1e-10));
        for (double h : {0.55, 0.58, 0.65, 0.7, 0.74}) {
            check("l_infty * H(2H-1) = 1",
                  near(l_infty(h) * h * (2.0 * h - 1.0), 1.0, 1e-10));
            check("c_cov (1-theta)^2 = H(2H-1) sigma_1^2",
                  near(c_theta_h_cov(0.6, h) * 0.16, h * (2.0 * h - 1.0) * sigma_1_sq(h),
                       1e-10));
        }
    }
    {
        const MomentMap fgn(CovarianceModel::fgn(0.58));
        const double f = fgn.f_value(0.6);
        check("fgn f_inverse(f(0.6)) = 0.6", near(fgn.f_inverse(f).theta, 0.6, 1e-8));
        check("fgn f brute-force agreement",
              near(f, fgn.f_value_bruteforce(0.6, 800), 1e-8));
        const auto rep = check_hypothesis(CovarianceModel::fgn(0.58), 0.58, 100, 1000);
        check("fgn hypothesis constant = H(2H-1)",
              near(rep.estimated_C, 0.58 * 0.16, 1e-4) && rep.satisfied);
    }
    {
        const auto arfima = CovarianceModel::arfima(0.08);
        check("arfima R(1)/R(0) = d/(1-d)",
              near(arfima.covariance(1) / arfima.covariance(0), 0.08 / 0.92, 1e-12));
        bool even = true;
        for (std::int64_t k : {1, 7, 40})
            even = even && arfima.covariance(k) == arfima.covariance(-k);
        check("covariance evenness", even);
    }
    os << (failures == 0 ? "all checks passed\n" : "some checks FAILED\n");
    return failures == 0 ? 0 : 1;
}

} // namespace longmem::cli
