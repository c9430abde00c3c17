#pragma once

// Asymptotic (co)variance estimation for the empirical rank correlations:
// the iid sample-mean form, the Bartlett-weighted long-run (HAC) form, and
// the delta-method combinations for gamma, tau_b and rho_b. Summations run
// in a fixed left-to-right order for reproducibility.

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rankcorr/core.hpp"
#include "rankcorr/empirical.hpp"
#include "rankcorr/estimators.hpp"
#include "rankcorr/influence.hpp"

namespace rankcorr {

enum class VarianceMode { iid, hac };

// Bartlett is the only kernel shipped; the struct exists so that a bandwidth
// override travels with the choice of estimator.
struct HacConfig {
    int bandwidth = 1;

    static HacConfig default_for(std::size_t n) {
        const int b = static_cast<int>(2.0 * std::cbrt(static_cast<double>(n)));
        const int cap = n > 1 ? static_cast<int>(n) - 1 : 1;
        return HacConfig{std::clamp(b, 1, cap)};
    }
};

inline double bartlett_weight(double u) {
    const double a = std::abs(u);
    return a <= 1.0 ? 1.0 - a : 0.0;
}

struct CovarianceEstimate {
    KernelId l;
    KernelId m;
    double value = 0.0;
    VarianceMode mode = VarianceMode::iid;
};

namespace detail {

inline double mean_product(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc / static_cast<double>(a.size());
}

// (1/n) sum_{i=1}^{n-h} a_i b_{i+h}
inline double cross_autocov(std::span<const double> a, std::span<const double> b,
                            std::size_t h) {
    double acc = 0.0;
    for (std::size_t i = 0; i + h < a.size(); ++i) acc += a[i] * b[i + h];
    return acc / static_cast<double>(a.size());
}

// Bartlett-weighted two-sided long-run cross-covariance of two series
// (without the kernel-order factors).
inline double long_run(std::span<const double> a, std::span<const double> b,
                       const HacConfig& cfg) {
    if (cfg.bandwidth < 1) throw invalid_spec("hac: bandwidth must be >= 1");
    const std::size_t n = a.size();
    double acc = mean_product(a, b);
    const std::size_t hmax =
        std::min<std::size_t>(static_cast<std::size_t>(cfg.bandwidth), n - 1);
    for (std::size_t h = 1; h <= hmax; ++h) {
        const double w = bartlett_weight(static_cast<double>(h) /
                                         static_cast<double>(cfg.bandwidth + 1));
        acc += w * (cross_autocov(a, b, h) + cross_autocov(b, a, h));
    }
    return acc;
}

}  // namespace detail

// sigma_lm = r_l r_m (1/n) sum_i k1_l(X_i,Y_i) k1_m(X_i,Y_i)
inline CovarianceEstimate sigma_iid(const InfluenceSeries& a, const InfluenceSeries& b) {
    if (a.values.size() != b.values.size())
        throw invalid_spec("sigma_iid: series lengths differ");
    const double r = static_cast<double>(a.order) * static_cast<double>(b.order);
    return {a.kernel, b.kernel, r * detail::mean_product(a.values, b.values),
            VarianceMode::iid};
}

inline CovarianceEstimate sigma_iid(const PairedSample& p, KernelId l, KernelId m) {
    const InfluenceSeries a = influence_series(l, p);
    if (m == l) return sigma_iid(a, a);
    return sigma_iid(a, influence_series(m, p));
}

inline CovarianceEstimate sigma_hac(const InfluenceSeries& a, const InfluenceSeries& b,
                                    const HacConfig& cfg) {
    if (a.values.size() != b.values.size())
        throw invalid_spec("sigma_hac: series lengths differ");
    const double r = static_cast<double>(a.order) * static_cast<double>(b.order);
    return {a.kernel, b.kernel, r * detail::long_run(a.values, b.values, cfg),
            VarianceMode::hac};
}

inline CovarianceEstimate sigma_hac(const PairedSample& p, KernelId l, KernelId m,
                                    const HacConfig& cfg) {
    const InfluenceSeries a = influence_series(l, p);
    if (m == l) return sigma_hac(a, a, cfg);
    return sigma_hac(a, influence_series(m, p), cfg);
}

// sigma^2_gamma = (sigma^2_tau + gamma^2 sigma^2_nu + 2 gamma sigma_tau_nu) / (1-nu)^2
inline double delta_variance_gamma(double tau, double nu, double s_tt, double s_nn,
                                   double s_tn) {
    if (nu >= 1.0) throw degenerate_denominator("gamma variance: nu >= 1");
    const double g = tau / (1.0 - nu);
    return (s_tt + g * g * s_nn + 2.0 * g * s_tn) / ((1.0 - nu) * (1.0 - nu));
}

// Delta-method variance of c / sqrt(cX * cY). Evaluates the gradient form
// J Sigma J' with J = (1/sqrt(cX cY), -c/(2 cX^{3/2} sqrt(cY)),
// -c/(2 cY^{3/2} sqrt(cX))); shared by tau_b (tau-quantities), rho_b
// (rho-quantities) and tau_b_mod.
inline double delta_variance_ratio3(double c, double cX, double cY, double s_cc,
                                    double s_ccX, double s_ccY, double s_cXcX,
                                    double s_cYcY, double s_cXcY) {
    if (cX <= 0.0 || cY <= 0.0)
        throw degenerate_denominator("ratio variance: nonpositive denominator");
    const double quad = 0.25 * c * c *
                        (s_cXcX / (cX * cX) + s_cYcY / (cY * cY) +
                         2.0 * s_cXcY / (cX * cY));
    return (s_cc - c * (s_ccX / cX + s_ccY / cY) + quad) / (cX * cY);
}

namespace detail {

// influence values of the empirical Pearson correlation:
// psi_i = xt yt - (r/2)(xt^2 + yt^2) with standardized margins
inline std::vector<double> pearson_influence(const PairedSample& p) {
    const double n = static_cast<double>(p.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        mx += p.x[i];
        my += p.y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double dx = p.x[i] - mx, dy = p.y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx <= 0.0) throw degenerate_margin("pearson: degenerate margin x");
    if (syy <= 0.0) throw degenerate_margin("pearson: degenerate margin y");
    const double sx = std::sqrt(sxx / n), sy = std::sqrt(syy / n);
    const double r = sxy / std::sqrt(sxx * syy);
    std::vector<double> psi(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double xt = (p.x[i] - mx) / sx, yt = (p.y[i] - my) / sy;
        psi[i] = xt * yt - 0.5 * r * (xt * xt + yt * yt);
    }
    return psi;
}

}  // namespace detail

// Asymptotic variance estimate of the chosen coefficient, iid or long-run.
inline double coefficient_variance(const PairedSample& p, CoefficientId id,
                                   VarianceMode mode,
                                   std::optional<HacConfig> cfg = std::nullopt) {
    const HacConfig hc = cfg.value_or(HacConfig::default_for(p.size()));
    const auto sig = [&](const InfluenceSeries& a, const InfluenceSeries& b) {
        return mode == VarianceMode::iid ? sigma_iid(a, b).value
                                         : sigma_hac(a, b, hc).value;
    };
    switch (id) {
        case CoefficientId::tau: {
            const InfluenceSeries a = k1_tau(p);
            return sig(a, a);
        }
        case CoefficientId::rho: {
            const InfluenceSeries a = k1_rho(p);
            return sig(a, a);
        }
        case CoefficientId::gamma: {
            goodman_kruskal_gamma(p);  // raises the precise degeneracy error
            const double nu = nu_hat(p);
            const InfluenceSeries kt = k1_tau(p);
            const InfluenceSeries kn = k1_nu(p);
            return delta_variance_gamma(kendall_tau(p), nu, sig(kt, kt), sig(kn, kn),
                                        sig(kt, kn));
        }
        case CoefficientId::tau_b: {
            const double tx = kendall_tau(p.x, p.x);
            const double ty = kendall_tau(p.y, p.y);
            if (tx <= 0.0) throw degenerate_margin("tau_b: degenerate margin x");
            if (ty <= 0.0) throw degenerate_margin("tau_b: degenerate margin y");
            const InfluenceSeries kt = k1_tau(p);
            const InfluenceSeries kx = k1_tau_margin(p.x, Margin::x);
            const InfluenceSeries ky = k1_tau_margin(p.y, Margin::y);
            return delta_variance_ratio3(kendall_tau(p), tx, ty, sig(kt, kt),
                                         sig(kt, kx), sig(kt, ky), sig(kx, kx),
                                         sig(ky, ky), sig(kx, ky));
        }
        case CoefficientId::rho_b: {
            const double rx = spearman_rho(p.x, p.x);
            const double ry = spearman_rho(p.y, p.y);
            if (rx <= 0.0) throw degenerate_margin("rho_b: degenerate margin x");
            if (ry <= 0.0) throw degenerate_margin("rho_b: degenerate margin y");
            const InfluenceSeries kr = k1_rho(p);
            const InfluenceSeries kx = k1_rho_margin(p.x, Margin::x);
            const InfluenceSeries ky = k1_rho_margin(p.y, Margin::y);
            return delta_variance_ratio3(spearman_rho(p), rx, ry, sig(kr, kr),
                                         sig(kr, kx), sig(kr, ky), sig(kx, kx),
                                         sig(ky, ky), sig(kx, ky));
        }
        case CoefficientId::tau_b_mod: {
            // tau / sqrt((1-zeta2(X))(1-zeta2(Y))): same ratio shape, with the
            // rho-margin kernels driving the denominator covariances
            const double zx = 1.0 - tie_probabilities(p.x).zeta2;
            const double zy = 1.0 - tie_probabilities(p.y).zeta2;
            if (zx <= 0.0) throw degenerate_margin("tau_b_mod: degenerate margin x");
            if (zy <= 0.0) throw degenerate_margin("tau_b_mod: degenerate margin y");
            const InfluenceSeries kt = k1_tau(p);
            const InfluenceSeries kx = k1_rho_margin(p.x, Margin::x);
            const InfluenceSeries ky = k1_rho_margin(p.y, Margin::y);
            return delta_variance_ratio3(kendall_tau(p), zx, zy, sig(kt, kt),
                                         sig(kt, kx), sig(kt, ky), sig(kx, kx),
                                         sig(ky, ky), sig(kx, ky));
        }
        case CoefficientId::pearson: {
            const std::vector<double> psi = detail::pearson_influence(p);
            return mode == VarianceMode::iid ? detail::mean_product(psi, psi)
                                             : detail::long_run(psi, psi, hc);
        }
    }
    throw invalid_spec("unknown coefficient");
}

}  // namespace rankcorr
