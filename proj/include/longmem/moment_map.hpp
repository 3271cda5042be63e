// The moment map f(theta) = E(Y_t^2) of the stationary AR(1) solution
// driven by a given noise law, its derivative and numeric inverse, the
// stationary covariance R_Y, and the asymptotic-variance constants of the
// estimator CLTs.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "longmem/detail/math.hpp"
#include "longmem/errors.hpp"
#include "longmem/noise_models.hpp"

namespace longmem {

/// sigma_1^2 of the alpha-hat CLT, evaluated through the stated closed form
///   [H(2H-1)]^{-1} pi^{-1} B(2H-1, 2-2H) sin(2 pi H - pi)
/// with B(a,b) = Gamma(a)Gamma(b)/Gamma(a+b).  The form assumes a noise
/// whose tail constant C equals 1; see sigma1_sq_effective for the scaling
/// applied to the built-in models.
inline double sigma_1_sq(double hurst) {
    if (!(hurst > 0.5 && hurst < 1.0))
        throw parameter_error("sigma_1_sq: H must lie in (1/2, 1)");
    const double a = 2.0 * hurst - 1.0;
    return detail::beta(a, 2.0 - 2.0 * hurst) * std::sin(detail::pi * a) /
           (hurst * a * detail::pi);
}

/// l_infty = 2 * integral_0^1 (1-x) x^{2H-2} dx, in closed form.
inline double l_infty(double hurst) {
    if (!(hurst > 0.5 && hurst < 1.0))
        throw parameter_error("l_infty: H must lie in (1/2, 1)");
    return 2.0 * (1.0 / (2.0 * hurst - 1.0) - 1.0 / (2.0 * hurst));
}

/// Covariance-asymptotics constant of R_Y(k) ~ C k^{2H-2} (Beta form).
inline double c_theta_h_cov(double theta, double hurst) {
    if (!(theta >= 0.0 && theta < 1.0))
        throw parameter_error("c_theta_h_cov: theta must lie in [0, 1)");
    if (!(hurst > 0.5 && hurst < 1.0))
        throw parameter_error("c_theta_h_cov: H must lie in (1/2, 1)");
    const double a = 2.0 * hurst - 1.0;
    const double om = 1.0 - theta;
    return detail::beta(a, 2.0 - 2.0 * hurst) * std::sin(detail::pi * a) /
           (om * om * detail::pi);
}

/// Spectral constant of h_Y(lambda) ~ C |lambda|^{1-2H} (Gamma form);
/// reduces to spectral_constant(H) at theta = 0.
inline double c_theta_h_spec(double theta, double hurst) {
    if (!(theta >= 0.0 && theta < 1.0))
        throw parameter_error("c_theta_h_spec: theta must lie in [0, 1)");
    const double om = 1.0 - theta;
    return spectral_constant(hurst) / (om * om);
}

/// Asymptotic variance of n^{1-H}(alpha_hat - alpha) for a concrete model:
/// the limit constant sigma_1^2 scaled by the model's tail constant C.  White
/// noise has no long memory; there the classical sqrt(n) CLT applies
/// (h_effective = 1/2) and the variance is the innovation variance.
inline double sigma1_sq_effective(const CovarianceModel& model, double hurst) {
    if (model.kind() == NoiseKind::white) return model.sigma();
    return model.hypothesis_constant() * sigma_1_sq(hurst);
}

/// Evaluator of f, f', f^{-1} and R_Y for one noise law, to a fixed
/// absolute tolerance.  The covariance prefix is tabulated eagerly at
/// construction, so instances are immutable and freely shared across
/// threads.
///
/// Both f and R_Y use single-series reductions of their defining double
/// sums (resummation over the diagonal index):
///   f(theta)  = (R(0) + 2 sum_{k>=1} R(k) theta^k) / (1 - theta^2)
///   R_Y(k)    = sum_{m in Z} R(|m|) theta^{|k-m|} / (1 - theta^2)
/// truncated where the geometric tail bound with |R(k)| <= R(0) drops
/// below tol.
class MomentMap {
public:
    static constexpr double kThetaEps = 1e-6;

    explicit MomentMap(CovarianceModel model, double tol = 1e-10)
        : model_(std::move(model)), tol_(tol) {
        if (!(tol_ > 0.0)) throw parameter_error("MomentMap: tol must be positive");
        std::size_t depth = 0;
        switch (model_.kind()) {
            case NoiseKind::white: depth = 0; break;
            case NoiseKind::custom: depth = model_.custom_sequence().size() - 1; break;
            default: depth = kCacheDepth; break;
        }
        cov_ = model_.cov_sequence(depth);
    }

    const CovarianceModel& model() const noexcept { return model_; }
    double tol() const noexcept { return tol_; }

    /// Smallest K with 2 R(0) theta^{K+1} / ((1-theta)(1-theta^2)) < tol.
    std::size_t truncation_depth(double theta) const {
        const double r0 = cov_[0];
        const double bound0 = 2.0 * r0 / ((1.0 - theta) * (1.0 - theta * theta));
        if (bound0 * theta < tol_) return 1;
        // theta^{K+1} < tol / bound0
        const double target = tol_ / bound0;
        double k = std::ceil(std::log(target) / std::log(theta)) - 1.0;
        std::size_t K = k > 1.0 ? static_cast<std::size_t>(k) : 1;
        while (bound0 * std::pow(theta, static_cast<double>(K + 1)) >= tol_) ++K;
        return K;
    }

    double f_value(double theta) const {
        check_theta(theta);
        const std::size_t K = series_depth(theta);
        double s = 0.0;
        CovStream cov(*this, 1);
        double tp = theta;
        for (std::size_t k = 1; k <= K; ++k) {
            s += cov.next() * tp;
            tp *= theta;
        }
        return (cov_[0] + 2.0 * s) / (1.0 - theta * theta);
    }

    /// Direct truncation of the double sum sum_{i,j<=K} theta^{i+j} R(i-j).
    /// O(K^2); reference oracle for f_value.
    double f_value_bruteforce(double theta, std::size_t K) const {
        check_theta(theta);
        std::vector<double> r = model_.kind() == NoiseKind::custom
                                    ? model_.custom_sequence()
                                    : model_.cov_sequence(K);
        if (r.size() <= K)
            throw insufficient_data_error("f_value_bruteforce: custom sequence too short");
        std::vector<double> tp(K + 1);
        tp[0] = 1.0;
        for (std::size_t i = 1; i <= K; ++i) tp[i] = tp[i - 1] * theta;
        double total = 0.0;
        for (std::size_t i = 0; i <= K; ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j <= K; ++j) {
                const std::size_t lag = i > j ? i - j : j - i;
                row += tp[j] * r[lag];
            }
            total += tp[i] * row;
        }
        return total;
    }

    /// f'(theta) = (2 theta f(theta) + 2 sum_{k>=1} k R(k) theta^{k-1})
    ///             / (1 - theta^2), term-wise derivative of the reduced
    /// series, truncated by the corresponding geometric bound.
    double f_derivative(double theta) const {
        check_theta(theta);
        const double f = f_value(theta);
        std::size_t K = series_depth(theta);
        // extend until the derivative tail bound is under tol as well
        const double r0 = cov_[0];
        const double denom = (1.0 - theta) * (1.0 - theta) * (1.0 - theta * theta);
        auto tail = [&](std::size_t k) {
            return 2.0 * r0 * std::pow(theta, static_cast<double>(k)) *
                   ((static_cast<double>(k) + 1.0) * (1.0 - theta) + theta) / denom;
        };
        while (tail(K) >= tol_) ++K;
        double s = 0.0;
        CovStream cov(*this, 1);
        double tp = 1.0;
        for (std::size_t k = 1; k <= K; ++k) {
            s += static_cast<double>(k) * cov.next() * tp;
            tp *= theta;
        }
        return (2.0 * theta * f + 2.0 * s) / (1.0 - theta * theta);
    }

    struct Inversion {
        double theta = 0.0;
        bool clamped = false;
    };

    /// Solves f(theta) = y by bracketed bisection refined with safeguarded
    /// Newton steps.  Statistics below f(eps) or above f(1-eps) clamp to
    /// the nearer boundary with a flag; f is strictly increasing, so the
    /// bracket is always valid.
    Inversion f_inverse(double y) const {
        if (!(y > 0.0)) throw parameter_error("f_inverse: y must be positive");
        const double lo = kThetaEps;
        const double hi = 1.0 - kThetaEps;
        double flo = f_value(lo);
        if (y <= flo) return {lo, true};

        // expand the upper bracket progressively; f(1-eps) can be very
        // large and is only evaluated when y forces it
        double a = lo;
        double b = hi;
        bool bracketed = false;
        for (double cand : {0.5, 0.9, 0.99, 0.999, 0.9999, 0.99999, hi}) {
            if (f_value(cand) >= y) {
                b = cand;
                bracketed = true;
                break;
            }
            a = cand;
        }
        if (!bracketed) return {hi, true};

        double x = 0.5 * (a + b);
        for (int it = 0; it < 200; ++it) {
            const double fx = f_value(x);
            if (std::abs(fx - y) < tol_) return {x, false};
            if (fx < y) {
                a = x;
            } else {
                b = x;
            }
            const double d = f_derivative(x);
            double next = x - (fx - y) / d;
            if (!(next > a && next < b)) next = 0.5 * (a + b);
            if (next == x) break;
            x = next;
        }
        return {x, false};
    }

    /// R_Y(k) by the reduced single series; even in k.
    double r_y(double theta, std::int64_t k) const {
        check_theta(theta);
        const std::int64_t kk = k < 0 ? -k : k;
        const std::int64_t J = static_cast<std::int64_t>(series_depth(theta));
        double s = cov_at(kk); // j = 0
        double tp = theta;
        for (std::int64_t j = 1; j <= J; ++j) {
            const std::int64_t up = kk + j;
            const std::int64_t dn = kk - j < 0 ? j - kk : kk - j;
            s += (cov_at(up) + cov_at(dn)) * tp;
            tp *= theta;
        }
        return s / (1.0 - theta * theta);
    }

    /// sigma_H^2 = 2 sum_{k in Z} R_Y(k)^2.  The sum has a power-law tail
    /// (R_Y(k)^2 ~ c^2 k^{4H-4}); it is truncated at K* and completed with
    /// the integral of the asymptote, 4 c^2 K*^{4H-3} / (3-4H), where
    /// c = C_model / (1-theta)^2.  K* grows in octaves until the tail
    /// estimate is below tol_tail relative or the cap is reached; with the
    /// analytic tail added the residual error is far below tol_tail.
    /// Passing k_star pins the truncation depth (used by stability tests).
    double sigma_h_sq(double theta, double hurst, double tol_tail = 1e-6,
                      std::size_t k_star = 0) const {
        check_theta(theta);
        double c_tail = 0.0;
        if (model_.long_memory()) {
            if (!(hurst > 0.5 && hurst < 0.75))
                throw parameter_error("sigma_h_sq: H must lie in (1/2, 3/4)");
            const double om = 1.0 - theta;
            c_tail = model_.hypothesis_constant() / (om * om);
        }
        const std::size_t cap = max_r_y_lag(theta);
        std::size_t limit = k_star > 0 ? std::min(k_star, cap) : std::min<std::size_t>(1024, cap);

        auto tail_estimate = [&](std::size_t K) {
            if (c_tail == 0.0) return 0.0;
            return 4.0 * c_tail * c_tail *
                   std::pow(static_cast<double>(K), 4.0 * hurst - 3.0) / (3.0 - 4.0 * hurst);
        };

        const double r0 = r_y(theta, 0);
        double partial = r0 * r0;
        std::size_t k = 1;
        for (;;) {
            for (; k <= limit; ++k) {
                const double v = r_y(theta, static_cast<std::int64_t>(k));
                partial += 2.0 * v * v;
            }
            const double tail = tail_estimate(limit);
            const double total = 2.0 * partial + tail;
            if (k_star > 0 || tail < tol_tail * total || limit >= cap)
                return total;
            limit = std::min(limit * 2, cap);
        }
    }

    /// (theta, f(theta)) rows over a strictly increasing grid inside
    /// (eps, 1-eps).  Swapping the columns gives the inverse-function plot.
    std::vector<std::pair<double, double>> tabulate_f(std::span<const double> grid) const {
        std::vector<std::pair<double, double>> out;
        out.reserve(grid.size());
        double prev = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double t = grid[i];
            if (!(t > kThetaEps && t < 1.0 - kThetaEps))
                throw parameter_error("tabulate_f: grid point outside (eps, 1-eps)");
            if (i > 0 && !(t > prev))
                throw parameter_error("tabulate_f: grid must be strictly increasing");
            prev = t;
            out.emplace_back(t, f_value(t));
        }
        return out;
    }

private:
    static constexpr std::size_t kCachePad = 1024;
    static constexpr std::size_t kCacheDepth = (1u << 16) + kCachePad;

    void check_theta(double theta) const {
        if (!(theta > 0.0 && theta < 1.0))
            throw parameter_error("theta must lie in (0, 1)");
        if (theta > 1.0 - kThetaEps)
            throw parameter_error("theta too close to 1 for the series evaluation");
    }

    std::size_t series_depth(double theta) const {
        const std::size_t K = truncation_depth(theta);
        if (model_.kind() == NoiseKind::custom && K >= cov_.size())
            throw insufficient_data_error(
                "custom covariance: series needs " + std::to_string(K + 1) +
                " lags, only " + std::to_string(cov_.size()) + " stored");
        return K;
    }

    // largest lag for which r_y stays inside the cache
    std::size_t max_r_y_lag(double theta) const {
        if (model_.kind() != NoiseKind::custom) return kCacheDepth - kCachePad;
        const std::size_t J = series_depth(theta);
        const std::size_t len = cov_.size();
        return len > J + 1 ? len - J - 1 : 0;
    }

    double cov_at(std::int64_t k) const {
        const auto idx = static_cast<std::size_t>(k);
        if (idx < cov_.size()) return cov_[idx];
        if (model_.kind() == NoiseKind::white) return 0.0;
        return model_.covariance(k);
    }

    /// Sequential lag-by-lag covariance values; O(1) per step for every
    /// model kind, which keeps deep series affordable where the per-lag
    /// ARFIMA recurrence would otherwise restart at 0.
    class CovStream {
    public:
        CovStream(const MomentMap& map, std::int64_t start) : map_(map), k_(start) {
            if (map_.model_.kind() == NoiseKind::arfima && start > 0) {
                const std::size_t idx = static_cast<std::size_t>(start - 1);
                last_ = idx < map_.cov_.size() ? map_.cov_[idx]
                                               : cov_arfima(map_.model_.memory_d(),
                                                            map_.model_.sigma(), start - 1);
            }
        }

        double next() {
            const std::int64_t k = k_++;
            const auto idx = static_cast<std::size_t>(k);
            if (idx < map_.cov_.size()) {
                last_ = map_.cov_[idx];
                return last_;
            }
            switch (map_.model_.kind()) {
                case NoiseKind::white:
                    return 0.0;
                case NoiseKind::fgn:
                    return cov_fgn(map_.model_.hurst(), k);
                case NoiseKind::arfima: {
                    const double kd = static_cast<double>(k);
                    last_ *= (kd - 1.0 + map_.model_.memory_d()) / (kd - map_.model_.memory_d());
                    return last_;
                }
                case NoiseKind::custom:
                    throw insufficient_data_error("custom covariance exhausted at lag " +
                                                  std::to_string(k));
            }
            return 0.0;
        }

    private:
        const MomentMap& map_;
        std::int64_t k_;
        double last_ = 0.0;
    };

    CovarianceModel model_;
    double tol_;
    std::vector<double> cov_;
};

/// The asymptotic-variance constants of the two estimator CLTs for one
/// (model, theta, H) configuration; what the CLI `constants` command prints.
struct VarianceConstants {
    double f = 0.0;
    double f_prime = 0.0;
    double sigma_h_sq = 0.0;
    double sigma_1_sq = 0.0;
    double sigma1_sq_effective = 0.0;
    double c_cov = 0.0;
    double c_spec = 0.0;
    double l_inf = 0.0;
    double hypothesis_c = 0.0;
};

inline VarianceConstants variance_constants(const MomentMap& map, double theta, double hurst) {
    VarianceConstants v;
    v.f = map.f_value(theta);
    v.f_prime = map.f_derivative(theta);
    v.sigma_h_sq = map.sigma_h_sq(theta, hurst);
    v.sigma_1_sq = sigma_1_sq(hurst);
    v.sigma1_sq_effective = sigma1_sq_effective(map.model(), hurst);
    v.c_cov = c_theta_h_cov(theta, hurst);
    v.c_spec = c_theta_h_spec(theta, hurst);
    v.l_inf = l_infty(hurst);
    v.hypothesis_c = map.model().kind() == NoiseKind::custom
                         ? std::numeric_limits<double>::quiet_NaN()
                         : map.model().hypothesis_constant();
    return v;
}

} // namespace longmem
