// Replicated simulate/estimate runs with normality and joint-normality
// diagnostics for the standardized estimator statistics.
#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "longmem/detail/math.hpp"
#include "longmem/errors.hpp"
#include "longmem/estimators.hpp"
#include "longmem/gaussian_sim.hpp"
#include "longmem/moment_map.hpp"
#include "longmem/noise_models.hpp"

namespace longmem {

struct McConfig {
    CovarianceModel model = CovarianceModel::fgn(0.58);
    double theta = 0.6;
    double alpha = 0.4;
    std::size_t n = 3000;
    std::size_t reps = 2000; // desk-scale default; the full-size study is 10000
    std::uint64_t master_seed = 1;
    unsigned workers = 0; // 0: hardware concurrency
    double tol = 1e-10;
    /// Memory exponent for the CLT scalings; defaults to the model's own
    /// (H, d + 1/2, or 1/2 for white).  Required for custom models.
    std::optional<double> h_override;

    double h_effective() const {
        return h_override ? *h_override : model.h_effective();
    }
};

struct Moments {
    double mean = 0.0;
    double var = 0.0; // unbiased
    double skew = 0.0;
    double ex_kurtosis = 0.0;
};

/// Sample moments and the one-sample Kolmogorov-Smirnov distance to the
/// standard normal.  Requires at least 30 points.
inline std::pair<Moments, double> normality_diagnostics(std::span<const double> samples) {
    const std::size_t n = samples.size();
    if (n < 30) throw parameter_error("normality_diagnostics: need at least 30 samples");

    Moments m;
    for (double v : samples) m.mean += v;
    m.mean /= static_cast<double>(n);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : samples) {
        const double d = v - m.mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= static_cast<double>(n);
    m3 /= static_cast<double>(n);
    m4 /= static_cast<double>(n);
    m.var = m2 * static_cast<double>(n) / static_cast<double>(n - 1);
    if (m2 > 0.0) {
        m.skew = m3 / std::pow(m2, 1.5);
        m.ex_kurtosis = m4 / (m2 * m2) - 3.0;
    }

    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double cdf = detail::norm_cdf(sorted[i]);
        const double lo = static_cast<double>(i) / static_cast<double>(n);
        const double hi = static_cast<double>(i + 1) / static_cast<double>(n);
        ks = std::max(ks, std::max(cdf - lo, hi - cdf));
    }
    return {m, ks};
}

struct Grid2d {
    std::size_t bins = 0;
    double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;
    std::vector<std::size_t> counts; // row-major, counts[iy * bins + ix]
};

struct JointDiagnostics {
    double cross_corr = 0.0;
    Grid2d grid;
};

/// Pearson correlation plus a 2-D histogram over [-range, range]^2 for
/// joint-distribution displays.
inline JointDiagnostics joint_diagnostics(std::span<const double> g1,
                                          std::span<const double> g2,
                                          std::size_t bins = 40, double range = 4.0) {
    if (g1.size() != g2.size()) throw parameter_error("joint_diagnostics: length mismatch");
    const std::size_t n = g1.size();
    if (n < 30) throw parameter_error("joint_diagnostics: need at least 30 samples");

    double m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        m1 += g1[i];
        m2 += g2[i];
    }
    m1 /= static_cast<double>(n);
    m2 /= static_cast<double>(n);
    double c12 = 0.0, c11 = 0.0, c22 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = g1[i] - m1;
        const double b = g2[i] - m2;
        c12 += a * b;
        c11 += a * a;
        c22 += b * b;
    }

    JointDiagnostics out;
    out.cross_corr = (c11 > 0.0 && c22 > 0.0) ? c12 / std::sqrt(c11 * c22) : 0.0;
    out.grid.bins = bins;
    out.grid.xmin = out.grid.ymin = -range;
    out.grid.xmax = out.grid.ymax = range;
    out.grid.counts.assign(bins * bins, 0);
    const double w = 2.0 * range / static_cast<double>(bins);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = g1[i], y = g2[i];
        if (x < -range || x >= range || y < -range || y >= range) continue;
        const auto ix = static_cast<std::size_t>((x + range) / w);
        const auto iy = static_cast<std::size_t>((y + range) / w);
        ++out.grid.counts[iy * bins + ix];
    }
    return out;
}

/// One replication's record; `g1` standardizes the pre-inversion statistic
/// sqrt(n)(s2 - f(theta))/sigma_H and `g2` the alpha estimator.
struct Replication {
    std::size_t rep = 0;
    double theta_hat = 0.0;
    double alpha_hat = 0.0;
    double s2 = 0.0;
    double g1 = 0.0;
    double g2 = 0.0;
    bool clamped = false;
};

struct McSummary {
    McConfig config;
    double h_eff = 0.0;
    double f_theta = 0.0;
    double f_prime = 0.0;
    double sigma_h = 0.0;
    double sigma1_eff = 0.0;
    std::vector<Replication> replications;

    // clamped replications excluded (the CLT conditions on interior estimates)
    std::vector<double> g1_samples;       // pre-inversion statistic, standardized
    std::vector<double> g1_theta_samples; // sqrt(n)(theta_hat - theta) f'/sigma_H
    std::vector<double> g2_samples;
    std::size_t clamp_count = 0;

    Moments g1_moments, g1_theta_moments, g2_moments;
    double ks_g1 = 0.0, ks_g1_theta = 0.0, ks_g2 = 0.0;
    double cross_corr = 0.0;
    Grid2d grid;
    double runtime_seconds = 0.0;
};

/// Runs `reps` independent replications with per-replication derived seeds.
/// Replication i is seeded by derive_seed(master, i) and written to slot i,
/// so the result is identical for any worker count.
inline McSummary run_mc(const McConfig& config) {
    if (config.reps < 1 || config.n < 2)
        throw parameter_error("run_mc: need reps >= 1 and n >= 2");
    const auto t0 = std::chrono::steady_clock::now();

    const double h_eff = config.h_effective();
    const MomentMap map(config.model, config.tol);
    const CltScaling scale = make_clt_scaling(map, config.theta, h_eff);
    const double f_theta = map.f_value(config.theta);

    const std::vector<double> cov = config.model.cov_sequence(config.n - 1);
    const CirculantSampler sampler(cov, config.n);

    std::vector<Replication> reps(config.reps);
    const double sqrt_n = std::sqrt(static_cast<double>(config.n));

    auto run_one = [&](std::size_t i) {
        const std::uint64_t seed = derive_seed(config.master_seed, i);
        const std::vector<double> noise = sampler.sample(seed);
        std::vector<double> path(config.n);
        double prev = 0.0;
        for (std::size_t t = 0; t < config.n; ++t) {
            prev = config.alpha + config.theta * prev + noise[t];
            path[t] = prev;
        }
        const EstimationResult est = estimate(map, path);
        const StandardizedStats g = standardized_stats(scale, est, config.theta, config.alpha);
        Replication& r = reps[i];
        r.rep = i;
        r.theta_hat = est.theta_hat;
        r.alpha_hat = est.alpha_hat;
        r.s2 = est.s2;
        r.g1 = sqrt_n * (est.s2 - f_theta) / scale.sigma_h;
        r.g2 = g.g2_star;
        r.clamped = est.clamped;
    };

    unsigned workers = config.workers ? config.workers : std::thread::hardware_concurrency();
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(config.reps)));
    if (workers == 1) {
        for (std::size_t i = 0; i < config.reps; ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= config.reps) return;
                    run_one(i);
                }
            });
        for (auto& t : pool) t.join();
    }

    McSummary out;
    out.config = config;
    out.h_eff = h_eff;
    out.f_theta = f_theta;
    out.f_prime = scale.f_prime;
    out.sigma_h = scale.sigma_h;
    out.sigma1_eff = scale.sigma1_eff;
    out.replications = std::move(reps);

    for (const Replication& r : out.replications) {
        if (r.clamped) {
            ++out.clamp_count;
            continue;
        }
        out.g1_samples.push_back(r.g1);
        out.g1_theta_samples.push_back(sqrt_n * (r.theta_hat - config.theta) * scale.f_prime /
                                       scale.sigma_h);
        out.g2_samples.push_back(r.g2);
    }

    if (out.g1_samples.size() >= 30) {
        std::tie(out.g1_moments, out.ks_g1) = normality_diagnostics(out.g1_samples);
        std::tie(out.g1_theta_moments, out.ks_g1_theta) =
            normality_diagnostics(out.g1_theta_samples);
        std::tie(out.g2_moments, out.ks_g2) = normality_diagnostics(out.g2_samples);
        const JointDiagnostics jd = joint_diagnostics(out.g1_samples, out.g2_samples);
        out.cross_corr = jd.cross_corr;
        out.grid = jd.grid;
    }

    out.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

struct SweepRow {
    std::size_t n = 0;
    double mae_theta = 0.0;
    double mae_alpha = 0.0;
};

/// Monte Carlo mean absolute errors over an increasing grid of sample
/// sizes; the observable form of strong consistency.
inline std::vector<SweepRow> consistency_sweep(McConfig config,
                                               std::span<const std::size_t> n_grid) {
    if (n_grid.empty()) throw parameter_error("consistency_sweep: empty grid");
    for (std::size_t i = 1; i < n_grid.size(); ++i)
        if (!(n_grid[i] > n_grid[i - 1]))
            throw parameter_error("consistency_sweep: grid must be increasing");

    std::vector<SweepRow> rows;
    rows.reserve(n_grid.size());
    for (std::size_t n : n_grid) {
        config.n = n;
        const McSummary s = run_mc(config);
        SweepRow row;
        row.n = n;
        for (const Replication& r : s.replications) {
            row.mae_theta += std::abs(r.theta_hat - config.theta);
            row.mae_alpha += std::abs(r.alpha_hat - config.alpha);
        }
        row.mae_theta /= static_cast<double>(s.replications.size());
        row.mae_alpha /= static_cast<double>(s.replications.size());
        rows.push_back(row);
    }
    return rows;
}

} // namespace longmem
