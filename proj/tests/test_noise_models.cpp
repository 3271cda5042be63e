#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "longmem/noise_models.hpp"
#include "oracles.hpp"

using namespace longmem;

TEST_CASE("fGn covariance closed form", "[noise]") {
    CHECK(cov_fgn(0.58, 0) == 1.0);
    CHECK(std::abs(cov_fgn(0.5 + 1e-9, 1)) < 1e-8); // white-noise boundary
    // oracle: long-double evaluation of the closed form
    const long double twoH = 2.0L * 0.58L;
    const long double want = 0.5L * (std::pow(2.0L, twoH) - 2.0L);
    CHECK(cov_fgn(0.58, 1) == Catch::Approx(static_cast<double>(want)).epsilon(1e-13));
    CHECK(cov_fgn(0.58, 1) == Catch::Approx(0.11729).margin(5e-6));
    // long double retains enough digits through the cancellation up to
    // k ~ 2e4; beyond that the tail test below covers accuracy
    for (std::int64_t k : {100, 5000, 20000}) {
        const long double kk = static_cast<long double>(k);
        const long double direct = 0.5L * (std::pow(kk + 1.0L, twoH) +
                                           std::pow(kk - 1.0L, twoH) -
                                           2.0L * std::pow(kk, twoH));
        CHECK(cov_fgn(0.58, k) ==
              Catch::Approx(static_cast<double>(direct)).epsilon(1e-8));
    }
    CHECK_THROWS_AS(cov_fgn(0.5, 1), parameter_error);
    CHECK_THROWS_AS(cov_fgn(1.0, 1), parameter_error);
}

TEST_CASE("fGn tail follows H(2H-1) k^{2H-2}", "[noise]") {
    for (double h : {0.55, 0.58, 0.65, 0.7}) {
        const double c = h * (2.0 * h - 1.0);
        for (std::int64_t k : {1000, 3162, 10000, 100000}) {
            const double ratio = cov_fgn(h, k) / (c * std::pow(static_cast<double>(k), 2.0 * h - 2.0));
            INFO("H = " << h << ", k = " << k);
            CHECK(std::abs(ratio - 1.0) <= 0.01);
        }
    }
}

TEST_CASE("ARFIMA covariance against direct Gamma evaluation", "[noise]") {
    const double d = 0.08;
    auto direct = [&](std::int64_t k) {
        return std::tgamma(static_cast<double>(k) + d) * std::tgamma(1.0 - 2.0 * d) /
               (std::tgamma(static_cast<double>(k) + 1.0 - d) * std::tgamma(1.0 - d) *
                std::tgamma(d));
    };
    for (std::int64_t k = 0; k <= 50; ++k) {
        INFO("k = " << k);
        CHECK(cov_arfima(d, 1.0, k) == Catch::Approx(direct(k)).epsilon(1e-12));
    }
    // lag-one ratio d/(1-d)
    CHECK(cov_arfima(d, 1.0, 1) / cov_arfima(d, 1.0, 0) ==
          Catch::Approx(d / (1.0 - d)).epsilon(1e-12));
    // R(0) = Gamma(0.84)/Gamma(0.92)^2, cross-checked against Lanczos
    const double r0_lanczos = oracles::lanczos_gamma(0.84) /
                              (oracles::lanczos_gamma(0.92) * oracles::lanczos_gamma(0.92));
    CHECK(cov_arfima(d, 1.0, 0) == Catch::Approx(r0_lanczos).epsilon(1e-10));
    // white-noise limit d -> 0+
    CHECK(std::abs(cov_arfima(1e-12, 1.0, 1)) < 1e-10);
    CHECK_THROWS_AS(cov_arfima(0.5, 1.0, 1), parameter_error);
    CHECK_THROWS_AS(cov_arfima(0.0, 1.0, 1), parameter_error);
    CHECK_THROWS_AS(cov_arfima(0.1, -1.0, 1), parameter_error);
}

TEST_CASE("cov_sequence matches per-lag operations", "[noise]") {
    const auto white = CovarianceModel::white().cov_sequence(3);
    CHECK(white == std::vector<double>{1.0, 0.0, 0.0, 0.0});

    const auto fgn = CovarianceModel::fgn(0.58);
    const auto seq = fgn.cov_sequence(1);
    REQUIRE(seq.size() == 2);
    CHECK(seq[0] == 1.0);
    CHECK(seq[1] == Catch::Approx(0.11729).margin(5e-6));
    CHECK(CovarianceModel::fgn(0.7).cov_sequence(0) == std::vector<double>{1.0});

    const auto arfima = CovarianceModel::arfima(0.08);
    const auto aseq = arfima.cov_sequence(64);
    for (std::int64_t k = 0; k <= 64; ++k)
        CHECK(aseq[static_cast<std::size_t>(k)] ==
              Catch::Approx(cov_arfima(0.08, 1.0, k)).epsilon(1e-13));

    const auto custom = CovarianceModel::custom({1.0, 0.25, 0.1});
    CHECK(custom.cov_sequence(2) == std::vector<double>{1.0, 0.25, 0.1});
    CHECK_THROWS_AS(custom.cov_sequence(3), insufficient_data_error);
    CHECK_THROWS_AS(custom.covariance(5), insufficient_data_error);
}

TEST_CASE("covariances are even and bounded by R(0)", "[noise]") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<std::int64_t> lag(1, 1000);
    const auto models = {CovarianceModel::fgn(0.58), CovarianceModel::fgn(0.7),
                         CovarianceModel::arfima(0.08), CovarianceModel::arfima(0.2),
                         CovarianceModel::white(2.0)};
    for (const auto& m : models) {
        const double r0 = m.covariance(0);
        CHECK(r0 > 0.0);
        for (int rep = 0; rep < 50; ++rep) {
            const std::int64_t k = lag(rng);
            CHECK(m.covariance(k) == m.covariance(-k));
            CHECK(std::abs(m.covariance(k)) <= r0);
            if (m.long_memory()) CHECK(m.covariance(k) > 0.0);
        }
    }
}

TEST_CASE("Toeplitz covariance matrices are positive semidefinite", "[noise]") {
    for (std::size_t m : {8u, 32u, 64u}) {
        for (const auto& model :
             {CovarianceModel::fgn(0.58), CovarianceModel::fgn(0.7),
              CovarianceModel::arfima(0.08), CovarianceModel::arfima(0.2),
              CovarianceModel::white()}) {
            const auto cov = model.cov_sequence(m - 1);
            const double min_eig = oracles::toeplitz_min_eigenvalue(cov, m);
            INFO(model.describe() << ", m = " << m);
            CHECK(min_eig >= -1e-8 * cov[0]);
        }
    }
}

TEST_CASE("check_hypothesis estimates the tail constant", "[noise]") {
    SECTION("fGn") {
        const auto rep = check_hypothesis(CovarianceModel::fgn(0.58), 0.58, 100, 1000);
        CHECK(rep.satisfied);
        CHECK(rep.estimated_C == Catch::Approx(0.58 * 0.16).margin(1e-4));
        CHECK(rep.relative_drift < 1e-4);
        CHECK(rep.lags.front() == 100);
        CHECK(rep.lags.back() == 1000);
    }
    SECTION("white noise fails the hypothesis") {
        const auto rep = check_hypothesis(CovarianceModel::white(), 0.58, 10, 100);
        CHECK_FALSE(rep.satisfied);
        CHECK(rep.estimated_C == 0.0);
        for (double r : rep.ratios) CHECK(r == 0.0);
    }
    SECTION("ARFIMA with H = d + 1/2") {
        const auto model = CovarianceModel::arfima(0.08);
        const auto rep = check_hypothesis(model, 0.58, 100, 2000);
        CHECK(rep.satisfied);
        CHECK(rep.relative_drift < 0.05);
        // Stirling oracle: C = Gamma(1-2d)/(Gamma(1-d)Gamma(d))
        const double c = std::tgamma(0.84) / (std::tgamma(0.92) * std::tgamma(0.08));
        CHECK(rep.estimated_C == Catch::Approx(c).epsilon(1e-3));
    }
    CHECK_THROWS_AS(check_hypothesis(CovarianceModel::fgn(0.6), 0.6, 100, 10), parameter_error);
    CHECK_THROWS_AS(check_hypothesis(CovarianceModel::fgn(0.6), 1.1, 10, 100), parameter_error);
}

TEST_CASE("spectral constant", "[noise]") {
    // H = 3/4: Gamma(1/2) sin(pi/4) / pi = 1/sqrt(2 pi)
    CHECK(spectral_constant(0.75) == Catch::Approx(0.3989422804014327).epsilon(1e-12));
    CHECK(spectral_constant(0.58) ==
          Catch::Approx(oracles::lanczos_gamma(0.16) * std::sin(0.42 * longmem::detail::pi) /
                        longmem::detail::pi)
              .epsilon(1e-10));
    CHECK(spectral_constant(0.58) > 0.0);
    CHECK_THROWS_AS(spectral_constant(0.5), parameter_error);
    CHECK_THROWS_AS(spectral_constant(1.0), parameter_error);
    CHECK(spectral_near_boundary(0.5005));
    CHECK_FALSE(spectral_near_boundary(0.51));
    // divergence toward the pole
    CHECK(spectral_constant(0.5001) > 100.0 * spectral_constant(0.58));
}

TEST_CASE("model parameter domains are enforced", "[noise]") {
    CHECK_THROWS_AS(CovarianceModel::fgn(0.5), parameter_error);
    CHECK_THROWS_AS(CovarianceModel::fgn(1.0), parameter_error);
    CHECK_THROWS_AS(CovarianceModel::arfima(0.0), parameter_error);
    CHECK_THROWS_AS(CovarianceModel::arfima(0.5), parameter_error);
    CHECK_THROWS_AS(CovarianceModel::white(0.0), parameter_error);
    CHECK_THROWS_AS(CovarianceModel::custom({}), parameter_error);
    CHECK_THROWS_AS(CovarianceModel::custom({-1.0}), parameter_error);
}
