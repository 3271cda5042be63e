// Complex DFT of arbitrary length: iterative radix-2 with Bluestein's chirp
// transform for non power-of-two sizes.  Self-contained so that sampler
// output is bit-stable across platforms and worker counts.
#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "longmem/detail/math.hpp"

namespace longmem::detail {

using cplx = std::complex<double>;

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

/// Power-of-two FFT with precomputed twiddles and bit-reversal table.
class Radix2Plan {
public:
    explicit Radix2Plan(std::size_t n) : n_(n) {
        if (!is_pow2(n)) throw std::invalid_argument("Radix2Plan: size must be a power of two");
        rev_.resize(n);
        std::size_t log2n = 0;
        while ((std::size_t{1} << log2n) < n) ++log2n;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t r = 0;
            for (std::size_t b = 0; b < log2n; ++b)
                if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (log2n - 1 - b);
            rev_[i] = r;
        }
        // roots[k] = exp(-2 pi i k / n) for k < n/2
        roots_.resize(n / 2);
        for (std::size_t k = 0; k < n / 2; ++k) {
            const double ang = -2.0 * pi * static_cast<double>(k) / static_cast<double>(n);
            roots_[k] = cplx(std::cos(ang), std::sin(ang));
        }
    }

    std::size_t size() const noexcept { return n_; }

    /// In-place transform; inverse=true applies the conjugate transform and
    /// the 1/n normalization.
    void run(cplx* a, bool inverse) const {
        const std::size_t n = n_;
        for (std::size_t i = 0; i < n; ++i)
            if (i < rev_[i]) std::swap(a[i], a[rev_[i]]);
        for (std::size_t len = 2; len <= n; len <<= 1) {
            const std::size_t half = len >> 1;
            const std::size_t step = n / len;
            for (std::size_t i = 0; i < n; i += len) {
                for (std::size_t j = 0; j < half; ++j) {
                    cplx w = roots_[j * step];
                    if (inverse) w = std::conj(w);
                    const cplx u = a[i + j];
                    const cplx v = a[i + j + half] * w;
                    a[i + j] = u + v;
                    a[i + j + half] = u - v;
                }
            }
        }
        if (inverse) {
            const double inv = 1.0 / static_cast<double>(n);
            for (std::size_t i = 0; i < n; ++i) a[i] *= inv;
        }
    }

private:
    std::size_t n_;
    std::vector<std::size_t> rev_;
    std::vector<cplx> roots_;
};

/// DFT plan for arbitrary n.  Power-of-two sizes go straight to radix-2;
/// anything else uses Bluestein's identity jk = (j^2 + k^2 - (k-j)^2)/2,
/// turning the DFT into one circular convolution of padded length.
/// Chirp angles are reduced mod 2n in exact integer arithmetic before the
/// trig evaluation, which keeps them accurate for large j.
class FftPlan {
public:
    explicit FftPlan(std::size_t n)
        : n_(n), pow2_(is_pow2(n)), radix_(pow2_ ? n : next_pow2(2 * n - 1)) {
        if (n == 0) throw std::invalid_argument("FftPlan: size must be positive");
        if (!pow2_) {
            const std::size_t L = radix_.size();
            chirp_.resize(n_);
            bhat_.assign(L, cplx(0.0, 0.0));
            const std::uint64_t mod = 2 * static_cast<std::uint64_t>(n_);
            for (std::size_t j = 0; j < n_; ++j) {
                const std::uint64_t q = (static_cast<std::uint64_t>(j) * j) % mod;
                const double ang = pi * static_cast<double>(q) / static_cast<double>(n_);
                chirp_[j] = cplx(std::cos(ang), -std::sin(ang)); // exp(-i pi j^2 / n)
                const cplx b = std::conj(chirp_[j]);
                bhat_[j] = b;
                if (j != 0) bhat_[L - j] = b;
            }
            radix_.run(bhat_.data(), false);
        }
    }

    std::size_t size() const noexcept { return n_; }

    /// Forward DFT: X_k = sum_j x_j exp(-2 pi i j k / n).  In place.
    void forward(std::vector<cplx>& x) const {
        if (x.size() != n_) throw std::invalid_argument("FftPlan: length mismatch");
        if (pow2_) {
            radix_.run(x.data(), false);
            return;
        }
        const std::size_t L = radix_.size();
        std::vector<cplx> work(L, cplx(0.0, 0.0));
        for (std::size_t j = 0; j < n_; ++j) work[j] = x[j] * chirp_[j];
        radix_.run(work.data(), false);
        for (std::size_t j = 0; j < L; ++j) work[j] *= bhat_[j];
        radix_.run(work.data(), true);
        for (std::size_t k = 0; k < n_; ++k) x[k] = work[k] * chirp_[k];
    }

    /// Inverse DFT with 1/n normalization.
    void inverse(std::vector<cplx>& x) const {
        for (auto& v : x) v = std::conj(v);
        forward(x);
        const double inv = 1.0 / static_cast<double>(n_);
        for (auto& v : x) v = std::conj(v) * inv;
    }

private:
    std::size_t n_;
    bool pow2_;
    Radix2Plan radix_;
    std::vector<cplx> chirp_; // exp(-i pi j^2 / n), j < n
    std::vector<cplx> bhat_;  // FFT of the wrapped conjugate chirp
};

} // namespace longmem::detail
