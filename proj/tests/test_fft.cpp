#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <random>
#include <vector>

#include "longmem/detail/fft.hpp"

using longmem::detail::cplx;
using longmem::detail::FftPlan;

namespace {

// O(n^2) reference DFT
std::vector<cplx> naive_dft(const std::vector<cplx>& x) {
    const std::size_t n = x.size();
    std::vector<cplx> out(n);
    const double pi = 3.14159265358979323846;
    for (std::size_t k = 0; k < n; ++k) {
        cplx s(0.0, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            const double ang = -2.0 * pi * static_cast<double>(j * k % n) / static_cast<double>(n);
            s += x[j] * cplx(std::cos(ang), std::sin(ang));
        }
        out[k] = s;
    }
    return out;
}

std::vector<cplx> random_signal(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<cplx> x(n);
    for (auto& v : x) v = cplx(normal(rng), normal(rng));
    return x;
}

} // namespace

TEST_CASE("forward transform matches the naive DFT", "[fft]") {
    // power-of-two, even non-power (the embedding sizes 2(n-1)), odd, prime
    for (std::size_t n : {2u, 4u, 8u, 64u, 6u, 30u, 94u, 254u, 510u, 1022u, 3u, 5u, 7u, 97u, 251u}) {
        FftPlan plan(n);
        std::vector<cplx> x = random_signal(n, 1000 + n);
        std::vector<cplx> want = naive_dft(x);
        plan.forward(x);
        double err = 0.0;
        for (std::size_t k = 0; k < n; ++k) err = std::max(err, std::abs(x[k] - want[k]));
        INFO("n = " << n);
        CHECK(err < 1e-9);
    }
}

TEST_CASE("inverse undoes forward", "[fft]") {
    for (std::size_t n : {16u, 30u, 97u, 512u, 1022u, 5998u}) {
        FftPlan plan(n);
        const std::vector<cplx> x0 = random_signal(n, 77 + n);
        std::vector<cplx> x = x0;
        plan.forward(x);
        plan.inverse(x);
        double err = 0.0;
        for (std::size_t k = 0; k < n; ++k) err = std::max(err, std::abs(x[k] - x0[k]));
        INFO("n = " << n);
        CHECK(err < 1e-10);
    }
}

TEST_CASE("transform of an even real vector is real", "[fft]") {
    // the circulant embedding relies on this
    const std::size_t n = 10, m = 2 * (n - 1);
    std::vector<cplx> x(m, cplx(0.0, 0.0));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t j = 0; j < n; ++j) x[j] = u(rng);
    for (std::size_t j = 1; j + 1 < n; ++j) x[m - j] = x[j];
    FftPlan plan(m);
    plan.forward(x);
    for (const auto& v : x) CHECK(std::abs(v.imag()) < 1e-12);
}
