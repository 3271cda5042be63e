// Exact stationary Gaussian path generation via circulant embedding, AR(1)
// sample paths driven by it, and deterministic seed stream splitting.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "longmem/detail/fft.hpp"
#include "longmem/detail/math.hpp"
#include "longmem/errors.hpp"
#include "longmem/noise_models.hpp"

namespace longmem {

/// Identifies one replication of a seeded experiment.
struct SeedSpec {
    std::uint64_t master = 0;
    std::uint64_t replication = 0;
};

/// Counter-mode stream split: splitmix64 mix of master + index * golden
/// ratio.  The mix is a bijection and the odd increment makes the counter
/// injective, so distinct indices can never collide for a fixed master.
/// Stable across releases; changing it invalidates recorded runs.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return detail::splitmix64_mix(master + index * 0x9e3779b97f4a7c15ull);
}

inline std::uint64_t derive_seed(const SeedSpec& s) {
    return derive_seed(s.master, s.replication);
}

enum class SeriesKind { noise, ar1_path };

struct SeriesMeta {
    std::string model;
    double theta = std::numeric_limits<double>::quiet_NaN();
    double alpha = std::numeric_limits<double>::quiet_NaN();
    std::uint64_t seed = 0;
    std::size_t n = 0;
    bool eig_clamped = false; // tiny negative embedding eigenvalues were zeroed
};

/// A finite real sample path plus its provenance.
struct Series {
    std::vector<double> values;
    SeriesKind kind = SeriesKind::noise;
    SeriesMeta meta;
};

/// Davies-Harte sampler: embeds the Toeplitz covariance R(0..n-1) into the
/// circulant of size m = 2(n-1) built from the even extension, diagonalizes
/// it with one DFT, and synthesizes Gaussian paths in the spectral domain.
/// The first n coordinates of each draw have covariance exactly R.
///
/// Eigenvalue handling: values below -tol_eig * max are a hard error (the
/// sequence is not embeddable); values in [-tol_eig * max, 0) are rounding
/// noise and are clamped to zero with a flag.
class CirculantSampler {
public:
    CirculantSampler(std::span<const double> cov, std::size_t n, double tol_eig = 1e-8)
        : n_(n), m_(embedding_size(n)), plan_(m_) {
        if (cov.size() < n) throw parameter_error("CirculantSampler: covariance too short");

        std::vector<detail::cplx> ext(m_);
        for (std::size_t j = 0; j < n_; ++j) ext[j] = cov[j];
        for (std::size_t j = 1; j + 1 < n_; ++j) ext[m_ - j] = cov[j];
        plan_.forward(ext);

        double max_eig = 0.0;
        for (const auto& v : ext) max_eig = std::max(max_eig, v.real());
        double min_eig = 0.0;
        for (const auto& v : ext) min_eig = std::min(min_eig, v.real());
        min_eig_ratio_ = max_eig > 0.0 ? min_eig / max_eig : 0.0;
        if (min_eig < -tol_eig * max_eig)
            throw embedding_error(
                "covariance sequence is not embeddable: min/max eigenvalue ratio " +
                    std::to_string(min_eig_ratio_),
                min_eig_ratio_);

        scale_.resize(m_);
        const double inv_m = 1.0 / static_cast<double>(m_);
        for (std::size_t k = 0; k < m_; ++k) {
            double lam = ext[k].real();
            if (lam < 0.0) {
                lam = 0.0;
                clamped_ = true;
            }
            scale_[k] = std::sqrt(lam * inv_m);
        }
    }

    std::size_t path_length() const noexcept { return n_; }
    bool eig_clamped() const noexcept { return clamped_; }
    double min_eig_ratio() const noexcept { return min_eig_ratio_; }

    /// One zero-mean Gaussian path of length n with covariance R.
    /// Deterministic in the seed; safe to call concurrently.
    std::vector<double> sample(std::uint64_t seed) const {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> normal(0.0, 1.0);

        std::vector<detail::cplx> spec(m_);
        const std::size_t half = m_ / 2;
        spec[0] = scale_[0] * normal(rng);
        const double r2 = std::sqrt(0.5);
        for (std::size_t k = 1; k < half; ++k) {
            const double zr = normal(rng);
            const double zi = normal(rng);
            spec[k] = detail::cplx(zr, zi) * (scale_[k] * r2);
            spec[m_ - k] = std::conj(spec[k]);
        }
        spec[half] = scale_[half] * normal(rng);

        plan_.forward(spec);
        std::vector<double> out(n_);
        for (std::size_t j = 0; j < n_; ++j) out[j] = spec[j].real();
        return out;
    }

private:
    static std::size_t embedding_size(std::size_t n) {
        if (n < 2) throw parameter_error("CirculantSampler: n must be >= 2");
        return 2 * (n - 1);
    }

    std::size_t n_;
    std::size_t m_;
    detail::FftPlan plan_;
    std::vector<double> scale_; // sqrt(lambda_k / m)
    bool clamped_ = false;
    double min_eig_ratio_ = 0.0;
};

/// One-shot form of the sampler.
inline Series sample_stationary_gaussian(std::span<const double> cov, std::size_t n,
                                         const SeedSpec& seed, double tol_eig = 1e-8) {
    CirculantSampler sampler(cov, n, tol_eig);
    Series s;
    s.values = sampler.sample(derive_seed(seed));
    s.kind = SeriesKind::noise;
    s.meta.seed = derive_seed(seed);
    s.meta.n = n;
    s.meta.eig_clamped = sampler.eig_clamped();
    return s;
}

/// AR(1) path X_t = alpha + theta X_{t-1} + xi_t, t = 1..n, started at
/// X_0 = 0, with xi an exact stationary Gaussian path from the model.
/// Returns X_1..X_n.  burn_in > 0 simulates that many extra steps first and
/// drops them; exploratory only, not part of any reproduction recipe.
inline Series simulate_ar1(const CovarianceModel& model, double theta, double alpha,
                           std::size_t n, const SeedSpec& seed, std::size_t burn_in = 0) {
    if (!(theta > 0.0 && theta < 1.0))
        throw parameter_error("simulate_ar1: theta must lie in (0, 1)");
    if (n < 2) throw parameter_error("simulate_ar1: n must be >= 2");

    const std::size_t total = n + burn_in;
    const std::vector<double> cov = model.cov_sequence(total - 1);
    CirculantSampler sampler(cov, total);
    const std::uint64_t s = derive_seed(seed);
    const std::vector<double> noise = sampler.sample(s);

    std::vector<double> path(total);
    double prev = 0.0;
    for (std::size_t t = 0; t < total; ++t) {
        prev = alpha + theta * prev + noise[t];
        path[t] = prev;
    }
    Series out;
    out.values.assign(path.begin() + static_cast<std::ptrdiff_t>(burn_in), path.end());
    out.kind = SeriesKind::ar1_path;
    out.meta.model = model.describe();
    out.meta.theta = theta;
    out.meta.alpha = alpha;
    out.meta.seed = s;
    out.meta.n = n;
    out.meta.eig_clamped = sampler.eig_clamped();
    return out;
}

} // namespace longmem
