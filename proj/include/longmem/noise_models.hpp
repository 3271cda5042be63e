// Covariance sequences and spectral constants for long-memory stationary
// Gaussian noise laws, plus a numeric check of the power-law tail assumption
// R(k) ~ C |k|^(2H-2).
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "longmem/detail/math.hpp"
#include "longmem/errors.hpp"

namespace longmem {

enum class NoiseKind { white, fgn, arfima, custom };

inline const char* to_string(NoiseKind k) {
    switch (k) {
        case NoiseKind::white: return "white";
        case NoiseKind::fgn: return "fgn";
        case NoiseKind::arfima: return "arfima";
        case NoiseKind::custom: return "custom";
    }
    return "?";
}

/// Fractional Gaussian noise covariance
///   R(k) = (|k+1|^{2H} + |k-1|^{2H} - 2|k|^{2H}) / 2,  H in (1/2, 1).
///
/// For moderate and large |k| the second difference is evaluated through
/// expm1/log1p; the plain form loses most significant digits to
/// cancellation once |k|^{2H} dominates the difference.
inline double cov_fgn(double hurst, std::int64_t k) {
    if (!(hurst > 0.5 && hurst < 1.0))
        throw parameter_error("fgn: H must lie in (1/2, 1)");
    const std::int64_t a = k < 0 ? -k : k;
    if (a == 0) return 1.0;
    const double twoH = 2.0 * hurst;
    if (a == 1) return 0.5 * (std::pow(2.0, twoH) - 2.0);
    const double kd = static_cast<double>(a);
    const double up = std::expm1(twoH * std::log1p(1.0 / kd));
    const double dn = std::expm1(twoH * std::log1p(-1.0 / kd));
    return 0.5 * std::pow(kd, twoH) * (up + dn);
}

/// ARFIMA(0,d,0) covariance
///   R(k) = sigma * Gamma(k+d) Gamma(1-2d) / (Gamma(k+1-d) Gamma(1-d) Gamma(d)),
/// evaluated for k >= 1 by the lag recurrence R(k) = R(k-1) (k-1+d)/(k-d);
/// Gamma(k+d) itself overflows for k around 170.
inline double cov_arfima(double d, double sigma, std::int64_t k) {
    if (!(d > 0.0 && d < 0.5))
        throw parameter_error("arfima: d must lie in (0, 1/2)");
    if (!(sigma > 0.0))
        throw parameter_error("arfima: sigma must be positive");
    const std::int64_t a = k < 0 ? -k : k;
    double r = sigma * std::tgamma(1.0 - 2.0 * d) /
               (std::tgamma(1.0 - d) * std::tgamma(1.0 - d));
    for (std::int64_t j = 1; j <= a; ++j)
        r *= (static_cast<double>(j) - 1.0 + d) / (static_cast<double>(j) - d);
    return r;
}

/// Spectral constant of the covariance/spectral duality:
///   C_H = Gamma(2H-1) sin(pi - pi H) / pi.
/// Diverges as H -> 1/2+ (pole of Gamma at 0); see spectral_near_boundary.
inline double spectral_constant(double hurst) {
    if (!(hurst > 0.5 && hurst < 1.0))
        throw parameter_error("spectral_constant: H must lie in (1/2, 1)");
    return std::tgamma(2.0 * hurst - 1.0) * std::sin(detail::pi - detail::pi * hurst) / detail::pi;
}

/// True when H sits close enough to the Gamma pole at 1/2 that
/// spectral_constant is dominated by the divergence.  Surfaces as a warning
/// in the CLI rather than an error.
inline bool spectral_near_boundary(double hurst) {
    return hurst < 0.501;
}

/// Description of a stationary Gaussian noise law through its covariance
/// sequence.  Immutable after construction; all queries are pure.
class CovarianceModel {
public:
    static CovarianceModel white(double variance = 1.0) {
        if (!(variance > 0.0))
            throw parameter_error("white: variance must be positive");
        CovarianceModel m;
        m.kind_ = NoiseKind::white;
        m.sigma_ = variance;
        return m;
    }

    static CovarianceModel fgn(double hurst) {
        if (!(hurst > 0.5 && hurst < 1.0))
            throw parameter_error("fgn: H must lie in (1/2, 1)");
        CovarianceModel m;
        m.kind_ = NoiseKind::fgn;
        m.hurst_ = hurst;
        return m;
    }

    static CovarianceModel arfima(double d, double sigma = 1.0) {
        if (!(d > 0.0 && d < 0.5))
            throw parameter_error("arfima: d must lie in (0, 1/2)");
        if (!(sigma > 0.0))
            throw parameter_error("arfima: sigma must be positive");
        CovarianceModel m;
        m.kind_ = NoiseKind::arfima;
        m.d_ = d;
        m.sigma_ = sigma;
        return m;
    }

    static CovarianceModel custom(std::vector<double> seq) {
        if (seq.empty() || !(seq[0] > 0.0))
            throw parameter_error("custom: need a nonempty sequence with R(0) > 0");
        CovarianceModel m;
        m.kind_ = NoiseKind::custom;
        m.seq_ = std::move(seq);
        return m;
    }

    NoiseKind kind() const noexcept { return kind_; }
    double hurst() const noexcept { return hurst_; }
    double memory_d() const noexcept { return d_; }
    double sigma() const noexcept { return sigma_; }
    const std::vector<double>& custom_sequence() const noexcept { return seq_; }

    /// R(k); even in k.  Custom models refuse lags beyond their data.
    double covariance(std::int64_t k) const {
        const std::int64_t a = k < 0 ? -k : k;
        switch (kind_) {
            case NoiseKind::white:
                return a == 0 ? sigma_ : 0.0;
            case NoiseKind::fgn:
                return cov_fgn(hurst_, a);
            case NoiseKind::arfima:
                return cov_arfima(d_, sigma_, a);
            case NoiseKind::custom:
                if (static_cast<std::size_t>(a) >= seq_.size())
                    throw insufficient_data_error(
                        "custom covariance: lag " + std::to_string(a) +
                        " beyond stored length " + std::to_string(seq_.size()));
                return seq_[static_cast<std::size_t>(a)];
        }
        return 0.0;
    }

    /// [R(0), ..., R(K)].  The ARFIMA branch runs the lag recurrence once
    /// instead of restarting it per lag.
    std::vector<double> cov_sequence(std::size_t K) const {
        if (kind_ == NoiseKind::custom) {
            if (K >= seq_.size())
                throw insufficient_data_error(
                    "custom covariance: requested K=" + std::to_string(K) + " with only " +
                    std::to_string(seq_.size()) + " lags stored");
            return std::vector<double>(seq_.begin(),
                                       seq_.begin() + static_cast<std::ptrdiff_t>(K + 1));
        }
        std::vector<double> out(K + 1, 0.0);
        switch (kind_) {
            case NoiseKind::white:
                out[0] = sigma_;
                break;
            case NoiseKind::fgn:
                for (std::size_t k = 0; k <= K; ++k)
                    out[k] = cov_fgn(hurst_, static_cast<std::int64_t>(k));
                break;
            case NoiseKind::arfima: {
                double r = cov_arfima(d_, sigma_, 0);
                out[0] = r;
                for (std::size_t k = 1; k <= K; ++k) {
                    const double kd = static_cast<double>(k);
                    r *= (kd - 1.0 + d_) / (kd - d_);
                    out[k] = r;
                }
                break;
            }
            case NoiseKind::custom:
                break; // handled above
        }
        return out;
    }

    /// The constant C of the tail law R(k) ~ C |k|^{2H-2}:
    /// H(2H-1) for fGn, sigma Gamma(1-2d)/(Gamma(1-d)Gamma(d)) for ARFIMA,
    /// 0 for white noise (no long memory).  Custom models have no closed
    /// form; use check_hypothesis to estimate one.
    double hypothesis_constant() const {
        switch (kind_) {
            case NoiseKind::white:
                return 0.0;
            case NoiseKind::fgn:
                return hurst_ * (2.0 * hurst_ - 1.0);
            case NoiseKind::arfima:
                return sigma_ * std::tgamma(1.0 - 2.0 * d_) /
                       (std::tgamma(1.0 - d_) * std::tgamma(d_));
            case NoiseKind::custom:
                throw parameter_error("custom model has no closed-form tail constant");
        }
        return 0.0;
    }

    /// Memory exponent used for CLT rates: H for fGn, d + 1/2 for ARFIMA,
    /// 1/2 for white noise (classical rate).
    double h_effective() const {
        switch (kind_) {
            case NoiseKind::white: return 0.5;
            case NoiseKind::fgn: return hurst_;
            case NoiseKind::arfima: return d_ + 0.5;
            case NoiseKind::custom:
                throw parameter_error("custom model has no intrinsic memory exponent");
        }
        return 0.5;
    }

    bool long_memory() const noexcept {
        return kind_ == NoiseKind::fgn || kind_ == NoiseKind::arfima;
    }

    /// One-line key=value description, e.g. "model=fgn H=0.58".
    std::string describe() const {
        std::ostringstream os;
        os << "model=" << to_string(kind_);
        switch (kind_) {
            case NoiseKind::white: os << " sigma2=" << sigma_; break;
            case NoiseKind::fgn: os << " H=" << hurst_; break;
            case NoiseKind::arfima: os << " d=" << d_ << " sigma=" << sigma_; break;
            case NoiseKind::custom: os << " lags=" << seq_.size(); break;
        }
        return os.str();
    }

private:
    CovarianceModel() = default;

    NoiseKind kind_ = NoiseKind::white;
    double hurst_ = 0.0;
    double d_ = 0.0;
    double sigma_ = 1.0;
    std::vector<double> seq_;
};

/// Ratios R(k)/k^{2H-2} over an integer lag window, with the tail constant
/// estimated from the top decile of lags.
struct HypothesisReport {
    std::vector<std::int64_t> lags;
    std::vector<double> ratios;
    double estimated_C = 0.0;
    /// max |ratio/estimated_C - 1| over the top decile; infinite when the
    /// hypothesis fails (estimated_C <= 0).
    double relative_drift = std::numeric_limits<double>::infinity();
    bool satisfied = false;
};

/// Evaluates R(k) k^{2-2H} on [k_min, k_max] and reports how stable the
/// ratios are.  The tail law only defines a limit; the constant is
/// estimated by averaging the slowest (largest) decile of lags.
inline HypothesisReport check_hypothesis(const CovarianceModel& model, double hurst,
                                         std::int64_t k_min, std::int64_t k_max) {
    if (!(hurst > 0.5 && hurst < 1.0))
        throw parameter_error("check_hypothesis: H must lie in (1/2, 1)");
    if (!(k_min >= 1 && k_min < k_max))
        throw parameter_error("check_hypothesis: need 1 <= k_min < k_max");

    HypothesisReport rep;
    rep.lags.reserve(static_cast<std::size_t>(k_max - k_min + 1));
    rep.ratios.reserve(rep.lags.capacity());
    const double expo = 2.0 - 2.0 * hurst;
    for (std::int64_t k = k_min; k <= k_max; ++k) {
        rep.lags.push_back(k);
        rep.ratios.push_back(model.covariance(k) * std::pow(static_cast<double>(k), expo));
    }

    const std::size_t n = rep.ratios.size();
    const std::size_t decile = n >= 10 ? n / 10 : 1;
    double sum = 0.0;
    for (std::size_t i = n - decile; i < n; ++i) sum += rep.ratios[i];
    rep.estimated_C = sum / static_cast<double>(decile);

    if (rep.estimated_C > 0.0) {
        double drift = 0.0;
        for (std::size_t i = n - decile; i < n; ++i)
            drift = std::max(drift, std::abs(rep.ratios[i] / rep.estimated_C - 1.0));
        rep.relative_drift = drift;
        rep.satisfied = true;
    }
    return rep;
}

} // namespace longmem
