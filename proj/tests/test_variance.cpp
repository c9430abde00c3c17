#include "rankcorr/variance.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <vector>

#include "rankcorr/rng.hpp"
#include "support/samples.hpp"

using namespace rankcorr;

TEST(SigmaIid, WorkedExamples) {
    const PairedSample p({1, 2, 3}, {1, 2, 3});
    EXPECT_NEAR(sigma_iid(p, KernelId::tau, KernelId::tau).value, 4.0 / 9.0, 1e-15);
    EXPECT_NEAR(sigma_iid(p, KernelId::rho, KernelId::rho).value, 0.0, 1e-15);
    EXPECT_NEAR(sigma_iid(p, KernelId::tau, KernelId::nu).value, -4.0 / 9.0, 1e-15);
}

TEST(SigmaHac, WorkedExample) {
    const PairedSample p({1, 2, 3}, {1, 2, 3});
    EXPECT_NEAR(sigma_hac(p, KernelId::tau, KernelId::tau, HacConfig{2}).value,
                76.0 / 81.0, 1e-15);
}

TEST(SigmaHac, BandwidthOneEqualsLagZeroPlusSingleTerm) {
    RngStream rng(41);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 4 + static_cast<std::size_t>(rng.uniform() * 30);
        const PairedSample p = testsupport::random_pair(rng, n, rep % 2 == 0);
        const InfluenceSeries a = k1_tau(p);
        const double iid = sigma_iid(a, a).value;
        // manual lag-1 cross term
        double a1 = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) a1 += a.values[i] * a.values[i + 1];
        a1 /= static_cast<double>(n);
        const double expected = iid + 4.0 * 0.5 * (a1 + a1);
        EXPECT_NEAR(sigma_hac(a, a, HacConfig{1}).value, expected, 1e-13);
    }
}

TEST(SigmaHac, ApproachesIidValueOnWhiteNoise) {
    RngStream rng(47);
    const std::size_t n = 10000;
    Series x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = rng.normal();
        y[i] = rng.normal();
    }
    const PairedSample p(std::move(x), std::move(y));
    const InfluenceSeries k = k1_tau(p);
    const double iid = sigma_iid(k, k).value;
    const double hac = sigma_hac(k, k, HacConfig::default_for(n)).value;
    EXPECT_NEAR(hac, iid, 0.1);
}

TEST(SigmaHac, DiagonalNonNegativeAndSymmetric) {
    RngStream rng(42);
    const std::array<KernelId, 4> kernels{KernelId::tau, KernelId::rho, KernelId::nu,
                                          KernelId::tau_x};
    for (int rep = 0; rep < 30; ++rep) {
        const std::size_t n = 3 + static_cast<std::size_t>(rng.uniform() * 40);
        const PairedSample p = testsupport::random_pair(rng, n, rep % 2 == 0);
        const HacConfig cfg{1 + static_cast<int>(rng.uniform() * (n - 1))};
        for (KernelId k : kernels) {
            const InfluenceSeries s = influence_series(k, p);
            EXPECT_GE(sigma_iid(s, s).value, 0.0);
            EXPECT_GE(sigma_hac(s, s, cfg).value, -1e-13);
        }
        const InfluenceSeries a = k1_tau(p);
        const InfluenceSeries b = k1_nu(p);
        EXPECT_EQ(sigma_iid(a, b).value, sigma_iid(b, a).value);
        EXPECT_EQ(sigma_hac(a, b, cfg).value, sigma_hac(b, a, cfg).value);
    }
}

TEST(SigmaVariance, ScaleFreeUnderMonotoneTransforms) {
    RngStream rng(43);
    const PairedSample p = testsupport::random_pair(rng, 25, true);
    Series tx = p.x;
    for (double& v : tx) v = 3.0 * v + 2.0;
    const PairedSample q(tx, p.y);
    for (CoefficientId id : {CoefficientId::tau, CoefficientId::rho, CoefficientId::gamma})
        EXPECT_EQ(coefficient_variance(p, id, VarianceMode::iid),
                  coefficient_variance(q, id, VarianceMode::iid));
    EXPECT_EQ(coefficient_variance(p, CoefficientId::tau, VarianceMode::hac),
              coefficient_variance(q, CoefficientId::tau, VarianceMode::hac));
}

TEST(DeltaVarianceGamma, WorkedExamples) {
    EXPECT_NEAR(delta_variance_gamma(0.0, 0.0, 4.0 / 9.0, 0.0, 0.0), 4.0 / 9.0, 1e-15);
    EXPECT_NEAR(delta_variance_gamma(0.3, 0.5, 0.2, 0.1, 0.05), 1.184, 1e-12);
    EXPECT_THROW(delta_variance_gamma(0.1, 1.0, 0.2, 0.1, 0.05), degenerate_denominator);
}

namespace {

// gradient-times-covariance-matrix evaluation of the same variance
double ratio3_matrix_oracle(double c, double cX, double cY, double s_cc, double s_ccX,
                            double s_ccY, double s_cXcX, double s_cYcY, double s_cXcY) {
    const double j0 = 1.0 / std::sqrt(cX * cY);
    const double j1 = -0.5 * c / (std::pow(cX, 1.5) * std::sqrt(cY));
    const double j2 = -0.5 * c / (std::pow(cY, 1.5) * std::sqrt(cX));
    const double sigma[3][3] = {{s_cc, s_ccX, s_ccY},
                                {s_ccX, s_cXcX, s_cXcY},
                                {s_ccY, s_cXcY, s_cYcY}};
    const double j[3] = {j0, j1, j2};
    double acc = 0.0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) acc += j[a] * sigma[a][b] * j[b];
    return acc;
}

}  // namespace

TEST(DeltaVarianceRatio3, TrivialCase) {
    EXPECT_NEAR(delta_variance_ratio3(0.0, 1.0, 1.0, 4.0 / 9.0, 0, 0, 0, 0, 0),
                4.0 / 9.0, 1e-15);
    EXPECT_THROW(delta_variance_ratio3(0.1, 0.0, 1.0, 1, 0, 0, 0, 0, 0),
                 degenerate_denominator);
}

TEST(DeltaVarianceRatio3, MatchesMatrixOracle) {
    RngStream rng(44);
    for (int rep = 0; rep < 1000; ++rep) {
        const double c = 1.8 * rng.uniform() - 0.9;
        const double cX = 0.1 + 0.9 * rng.uniform();
        const double cY = 0.1 + 0.9 * rng.uniform();
        const double s_cc = rng.uniform();
        const double s_ccX = rng.uniform() - 0.5;
        const double s_ccY = rng.uniform() - 0.5;
        const double s_cXcX = rng.uniform();
        const double s_cYcY = rng.uniform();
        const double s_cXcY = rng.uniform() - 0.5;
        const double direct = delta_variance_ratio3(c, cX, cY, s_cc, s_ccX, s_ccY,
                                                    s_cXcX, s_cYcY, s_cXcY);
        const double oracle = ratio3_matrix_oracle(c, cX, cY, s_cc, s_ccX, s_ccY,
                                                   s_cXcX, s_cYcY, s_cXcY);
        EXPECT_NEAR(direct, oracle, 1e-12);
    }
}

TEST(CoefficientVariance, WorkedExamples) {
    const PairedSample p({1, 2, 3}, {1, 2, 3});
    EXPECT_NEAR(coefficient_variance(p, CoefficientId::tau, VarianceMode::iid),
                4.0 / 9.0, 1e-15);
    EXPECT_NEAR(coefficient_variance(p, CoefficientId::rho, VarianceMode::iid), 0.0,
                1e-15);
    EXPECT_NEAR(coefficient_variance(p, CoefficientId::tau, VarianceMode::hac,
                                     HacConfig{2}),
                76.0 / 81.0, 1e-15);
}

TEST(CoefficientVariance, GammaCloseToTauOnTieFreeData) {
    RngStream rng(45);
    for (int rep = 0; rep < 30; ++rep) {
        const std::size_t n = 5 + static_cast<std::size_t>(rng.uniform() * 40);
        const PairedSample p = testsupport::random_pair(rng, n, false);
        const double nn = static_cast<double>(n);
        const double v_tau = coefficient_variance(p, CoefficientId::tau, VarianceMode::iid);
        const double v_gamma =
            coefficient_variance(p, CoefficientId::gamma, VarianceMode::iid);
        const double tau = kendall_tau(p);
        // exact tie-free reduction: sigma2_gamma = sigma2_tau - 4 tau^2 / n^2
        EXPECT_NEAR(v_gamma, v_tau - 4.0 * tau * tau / (nn * nn), 1e-12);
    }
}

TEST(CoefficientVariance, PearsonMatchesNormalTheory) {
    RngStream rng(46);
    const std::size_t n = 40000;
    const double alpha = 0.6;
    Series x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = rng.normal();
        y[i] = alpha * x[i] + std::sqrt(1.0 - alpha * alpha) * rng.normal();
    }
    const PairedSample p(std::move(x), std::move(y));
    const double r = pearson_r(p);
    const double v = coefficient_variance(p, CoefficientId::pearson, VarianceMode::iid);
    const double theory = (1.0 - r * r) * (1.0 - r * r);
    EXPECT_NEAR(v, theory, 0.06);
}

TEST(SigmaHac, BandwidthZeroRejected) {
    const PairedSample p({1, 2, 3}, {1, 2, 3});
    EXPECT_THROW(sigma_hac(p, KernelId::tau, KernelId::tau, HacConfig{0}), invalid_spec);
}

TEST(HacConfig, DefaultBandwidthRule) {
    EXPECT_EQ(HacConfig::default_for(3).bandwidth, 2);
    EXPECT_EQ(HacConfig::default_for(50).bandwidth, 7);
    EXPECT_EQ(HacConfig::default_for(200).bandwidth, 11);
    EXPECT_EQ(HacConfig::default_for(800).bandwidth, 18);
    EXPECT_EQ(HacConfig::default_for(2).bandwidth, 1);
}
