#include "rankcorr/independence.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "rankcorr/rng.hpp"
#include "support/samples.hpp"

using namespace rankcorr;

TEST(SigmaIndIid, ContinuousConstants) {
    const TieProbabilities none{0.0, 0.0};
    EXPECT_EQ(sigma_ind_iid(CoefficientId::tau, none, none).value, 4.0 / 9.0);
    EXPECT_EQ(sigma_ind_iid(CoefficientId::rho, none, none).value, 1.0);
    EXPECT_EQ(sigma_ind_iid(CoefficientId::gamma, none, none).value, 4.0 / 9.0);
    EXPECT_EQ(sigma_ind_iid(CoefficientId::tau_b, none, none).value, 4.0 / 9.0);
    EXPECT_EQ(sigma_ind_iid(CoefficientId::rho_b, none, none).value, 1.0);
    EXPECT_EQ(sigma_ind_iid(CoefficientId::tau_b_mod, none, none).value, 4.0 / 9.0);
    EXPECT_EQ(sigma_ind_iid(CoefficientId::pearson, none, none).value, 1.0);
}

TEST(SigmaIndIid, GeometricMargins) {
    // Geom(0.5): zeta = 1/3, zeta2 = 1/7
    const TieProbabilities g{1.0 / 3.0, 1.0 / 7.0};
    EXPECT_NEAR(sigma_ind_iid(CoefficientId::tau, g, g).value,
                4.0 / 9.0 * (6.0 / 7.0) * (6.0 / 7.0), 1e-15);
    EXPECT_EQ(sigma_ind_iid(CoefficientId::rho_b, g, g).value, 1.0);
    EXPECT_EQ(sigma_ind_iid(CoefficientId::tau_b_mod, g, g).value, 4.0 / 9.0);
}

TEST(SigmaIndIid, OrderingAndRhoRelation) {
    RngStream rng(51);
    for (int rep = 0; rep < 100; ++rep) {
        TieProbabilities zx{0.1 + 0.8 * rng.uniform(), 0.0};
        TieProbabilities zy{0.1 + 0.8 * rng.uniform(), 0.0};
        zx.zeta2 = zx.zeta * rng.uniform();
        zy.zeta2 = zy.zeta * rng.uniform();
        const double v_tau = sigma_ind_iid(CoefficientId::tau, zx, zy).value;
        const double v_rho = sigma_ind_iid(CoefficientId::rho, zx, zy).value;
        const double v_gamma = sigma_ind_iid(CoefficientId::gamma, zx, zy).value;
        const double v_tau_b = sigma_ind_iid(CoefficientId::tau_b, zx, zy).value;
        EXPECT_NEAR(v_rho, 2.25 * v_tau, 1e-15);
        EXPECT_GE(v_gamma, v_tau_b - 1e-15);
        EXPECT_GE(v_tau_b, v_tau - 1e-15);
    }
}

TEST(SigmaIndIid, GeometricVarianceCurveShape) {
    // as the geometric mean grows, tie probabilities vanish; the tau variance
    // rises towards 4/9 and the gamma variance falls towards 4/9
    double prev_tau = 0.0, prev_gamma = 1e9;
    for (double mu : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
        const double pi = 1.0 / (1.0 + mu);
        const TieProbabilities z{pi / (2.0 - pi), pi * pi / (3.0 - (3.0 - pi) * pi)};
        const double v_tau = sigma_ind_iid(CoefficientId::tau, z, z).value;
        const double v_gamma = sigma_ind_iid(CoefficientId::gamma, z, z).value;
        EXPECT_GT(v_tau, prev_tau);
        EXPECT_LT(v_tau, 4.0 / 9.0);
        EXPECT_LT(v_gamma, prev_gamma);
        EXPECT_GT(v_gamma, 4.0 / 9.0);
        prev_tau = v_tau;
        prev_gamma = v_gamma;
    }
}

TEST(SigmaIndTs, ExactRelationsBetweenCoefficients) {
    RngStream rng(52);
    const PairedSample p = testsupport::random_pair(rng, 200, true);
    const HacConfig cfg = HacConfig::default_for(200);
    const double v_tau = sigma_ind_ts(CoefficientId::tau, p.x, p.y, cfg).value;
    const double v_rho = sigma_ind_ts(CoefficientId::rho, p.x, p.y, cfg).value;
    EXPECT_NEAR(v_rho, 2.25 * v_tau, 1e-13);

    // rho_b and tau_b_mod rescale by the full-sample self-rho denominators
    const double sx0 = spearman_rho(p.x, p.x);
    const double sy0 = spearman_rho(p.y, p.y);
    const double v_rho_b = sigma_ind_ts(CoefficientId::rho_b, p.x, p.y, cfg).value;
    const double v_tbm = sigma_ind_ts(CoefficientId::tau_b_mod, p.x, p.y, cfg).value;
    EXPECT_NEAR(v_rho_b, v_rho / (sx0 * sy0), 1e-13);
    EXPECT_NEAR(v_tbm, 4.0 / 9.0 * v_rho_b, 1e-13);

    // gamma and tau_b rescale by the single-tie factors
    const double tx = 1.0 - tie_probabilities(p.x).zeta;
    const double ty = 1.0 - tie_probabilities(p.y).zeta;
    const double v_gamma = sigma_ind_ts(CoefficientId::gamma, p.x, p.y, cfg).value;
    const double v_tau_b = sigma_ind_ts(CoefficientId::tau_b, p.x, p.y, cfg).value;
    EXPECT_NEAR(v_gamma, v_tau / (tx * tx * ty * ty), 1e-13);
    EXPECT_NEAR(v_tau_b, v_tau / (tx * ty), 1e-13);
}

TEST(SigmaIndTs, IidInputsApproachContinuousConstant) {
    RngStream rng(53);
    const std::size_t n = 10000;
    const Series x = testsupport::random_continuous(rng, n);
    const Series y = testsupport::random_continuous(rng, n);
    const double v =
        sigma_ind_ts(CoefficientId::tau, x, y, HacConfig::default_for(n)).value;
    EXPECT_NEAR(v, 4.0 / 9.0, 0.05);
}

TEST(SigmaIndTs, GaussianAr1MatchesAnalyticSpearmanAcf) {
    // AR(1) coefficient 0.8 on both margins, cross-independent; the Spearman
    // ACF of a Gaussian AR(1) is (6/pi) asin(0.8^h / 2)
    const std::size_t n = 30000;
    RngStream rng(54);
    Series x(n), y(n);
    double xs = 0.0, us = 0.0;
    for (int t = 0; t < 1000; ++t) {
        xs = 0.8 * xs + rng.normal();
        us = 0.8 * us + rng.normal();
    }
    for (std::size_t i = 0; i < n; ++i) {
        xs = 0.8 * xs + rng.normal();
        us = 0.8 * us + rng.normal();
        x[i] = xs;
        y[i] = us;
    }
    const HacConfig cfg = HacConfig::default_for(n);
    double target = 1.0;  // lag 0
    for (int h = 1; h <= cfg.bandwidth; ++h) {
        const double w = bartlett_weight(static_cast<double>(h) /
                                         static_cast<double>(cfg.bandwidth + 1));
        const double rho_s =
            6.0 / std::numbers::pi * std::asin(0.5 * std::pow(0.8, h));
        target += 2.0 * w * rho_s * rho_s;
    }
    target *= 4.0 / 9.0;
    const double v = sigma_ind_ts(CoefficientId::tau, x, y, cfg).value;
    EXPECT_NEAR(v, target, 0.3);
}

TEST(SigmaIndTs, DegenerateMargin) {
    const Series constant(10, 1.0);
    const Series other{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    EXPECT_THROW(
        sigma_ind_ts(CoefficientId::tau, constant, other, HacConfig{2}),
        degenerate_margin);
}
