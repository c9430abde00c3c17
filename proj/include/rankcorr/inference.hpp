#pragma once

// Confidence intervals, two-sided tests and the Fisher transformation,
// assembled from point estimates and asymptotic variance estimates.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "rankcorr/core.hpp"

namespace rankcorr {

inline double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

namespace detail {

// Acklam's rational approximation for the standard normal quantile
inline double normal_quantile_approx(double p) {
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - p_low) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace detail

// Standard normal quantile, refined by one Halley step against the erfc-based
// CDF; absolute error well below 1e-10 across (0, 1).
inline double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw invalid_level("normal_quantile: p outside (0,1)");
    double x = detail::normal_quantile_approx(p);
    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

// z(delta) = arctanh(delta)
inline double fisher(double delta) {
    if (std::abs(delta) >= 1.0)
        throw boundary_value("fisher: |estimate| >= 1; use the plain interval");
    return std::atanh(delta);
}

inline double fisher_inverse(double z) { return std::tanh(z); }

// variance of z(delta_hat): sigma^2 / (1 - delta^2)^2
inline double fisher_variance(double sigma2, double delta) {
    if (std::abs(delta) >= 1.0)
        throw boundary_value("fisher_variance: |estimate| >= 1");
    const double f = 1.0 - delta * delta;
    return sigma2 / (f * f);
}

struct ConfidenceInterval {
    double lower = 0.0;
    double upper = 0.0;
    double level = 0.0;
    bool fisher = false;
};

// Plain intervals are clamped to [-1, 1]; Fisher intervals are computed on
// the arctanh scale and transformed back, so they stay strictly inside.
inline ConfidenceInterval confidence_interval(double estimate, double sigma2,
                                              std::int64_t n, double level,
                                              bool use_fisher) {
    if (!(level > 0.0 && level < 1.0)) throw invalid_level("level outside (0,1)");
    if (n < 2) throw invalid_spec("confidence_interval: n < 2");
    if (sigma2 < 0.0) throw invalid_spec("confidence_interval: negative variance");
    const double z = normal_quantile(1.0 - (1.0 - level) / 2.0);
    if (use_fisher) {
        const double center = fisher(estimate);
        const double half =
            z * std::sqrt(fisher_variance(sigma2, estimate) / static_cast<double>(n));
        return {fisher_inverse(center - half), fisher_inverse(center + half), level, true};
    }
    const double half = z * std::sqrt(sigma2 / static_cast<double>(n));
    return {std::max(-1.0, estimate - half), std::min(1.0, estimate + half), level, false};
}

enum class TestVarianceMode { general, independence };

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
    double null_value = 0.0;
    TestVarianceMode variance_mode = TestVarianceMode::general;
};

// T = sqrt(n) (estimate - null) / sigma, two-sided normal p-value
inline TestResult coefficient_test(double estimate, double sigma2, std::int64_t n,
                                   double null_value, TestVarianceMode mode) {
    if (n < 2) throw invalid_spec("coefficient_test: n < 2");
    if (!(sigma2 > 0.0)) throw zero_variance("coefficient_test: variance is 0");
    const double t =
        std::sqrt(static_cast<double>(n)) * (estimate - null_value) / std::sqrt(sigma2);
    return {t, 2.0 * (1.0 - normal_cdf(std::abs(t))), null_value, mode};
}

}  // namespace rankcorr
