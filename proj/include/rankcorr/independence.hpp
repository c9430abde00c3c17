#pragma once

// Closed-form asymptotic variances under the null of independence, iid and
// time-series, with their nonparametric plug-in estimators.

#include <cmath>
#include <span>
#include <vector>

#include "rankcorr/core.hpp"
#include "rankcorr/empirical.hpp"
#include "rankcorr/estimators.hpp"
#include "rankcorr/variance.hpp"

namespace rankcorr {

enum class IndependenceMode { iid, ts };

struct IndependenceVariance {
    CoefficientId id;
    double value = 0.0;
    IndependenceMode mode = IndependenceMode::iid;
};

// iid case:
//   tau:   4/9 (1-zeta2(X))(1-zeta2(Y))
//   rho:   (1-zeta2(X))(1-zeta2(Y))
//   gamma: 4/9 (1-zeta2(X))(1-zeta2(Y)) / [(1-zeta(X))^2 (1-zeta(Y))^2]
//   tau_b: 4/9 (1-zeta2(X))(1-zeta2(Y)) / [(1-zeta(X))(1-zeta(Y))]
//   rho_b = 1, tau_b_mod = 4/9, pearson = 1
inline IndependenceVariance sigma_ind_iid(CoefficientId id, const TieProbabilities& zx,
                                          const TieProbabilities& zy) {
    const double f2 = (1.0 - zx.zeta2) * (1.0 - zy.zeta2);
    const auto tie_factor = [&]() {
        if (zx.zeta >= 1.0) throw degenerate_margin("independence variance: margin x");
        if (zy.zeta >= 1.0) throw degenerate_margin("independence variance: margin y");
        return (1.0 - zx.zeta) * (1.0 - zy.zeta);
    };
    double v = 0.0;
    switch (id) {
        case CoefficientId::tau: v = 4.0 / 9.0 * f2; break;
        case CoefficientId::rho: v = f2; break;
        case CoefficientId::gamma: {
            const double t = tie_factor();
            v = 4.0 / 9.0 * f2 / (t * t);
            break;
        }
        case CoefficientId::tau_b: v = 4.0 / 9.0 * f2 / tie_factor(); break;
        case CoefficientId::rho_b: v = 1.0; break;
        case CoefficientId::tau_b_mod: v = 4.0 / 9.0; break;
        case CoefficientId::pearson: v = 1.0; break;
    }
    return {id, v, IndependenceMode::iid};
}

namespace detail {

// classical moment ACF with full-sample mean and variance in the denominator
inline double moment_acf(std::span<const double> s, std::size_t h) {
    const double n = static_cast<double>(s.size());
    double m = 0.0;
    for (double v : s) m += v;
    m /= n;
    double denom = 0.0;
    for (double v : s) denom += (v - m) * (v - m);
    if (denom <= 0.0) throw degenerate_margin("acf: constant series");
    double num = 0.0;
    for (std::size_t i = 0; i + h < s.size(); ++i)
        num += (s[i] - m) * (s[i + h] - m);
    return num / denom;
}

}  // namespace detail

// Precomputed ingredients of the time-series independence variances, shared
// across coefficients evaluated on the same sample.
class TsIndependenceTable {
public:
    TsIndependenceTable(std::span<const double> x, std::span<const double> y,
                        const HacConfig& cfg) {
        if (x.size() != y.size())
            throw invalid_spec("sigma_ind_ts: series lengths differ");
        if (x.size() < 3) throw invalid_spec("sigma_ind_ts: need at least 3 observations");
        if (cfg.bandwidth < 1) throw invalid_spec("sigma_ind_ts: bandwidth must be >= 1");
        const std::size_t hmax =
            std::min<std::size_t>(static_cast<std::size_t>(cfg.bandwidth), x.size() - 2);
        sx0_ = spearman_rho(x, x);
        sy0_ = spearman_rho(y, y);
        if (sx0_ <= 0.0) throw degenerate_margin("independence variance: margin x");
        if (sy0_ <= 0.0) throw degenerate_margin("independence variance: margin y");
        base_ = sx0_ * sy0_;           // lag 0
        pearson_base_ = 1.0;           // r_X(0) r_Y(0)
        for (std::size_t h = 1; h <= hmax; ++h) {
            const double w = bartlett_weight(static_cast<double>(h) /
                                             static_cast<double>(cfg.bandwidth + 1));
            base_ += 2.0 * w * spearman_acf(x, static_cast<int>(h)) *
                     spearman_acf(y, static_cast<int>(h));
            pearson_base_ +=
                2.0 * w * detail::moment_acf(x, h) * detail::moment_acf(y, h);
        }
        zeta_x_ = tie_probabilities(x).zeta;
        zeta_y_ = tie_probabilities(y).zeta;
    }

    IndependenceVariance variance(CoefficientId id) const {
        double v = 0.0;
        switch (id) {
            case CoefficientId::tau: v = 4.0 / 9.0 * base_; break;
            case CoefficientId::rho: v = base_; break;
            case CoefficientId::gamma: {
                const double t = tie_factor();
                v = 4.0 / 9.0 * base_ / (t * t);
                break;
            }
            case CoefficientId::tau_b: v = 4.0 / 9.0 * base_ / tie_factor(); break;
            case CoefficientId::rho_b: v = base_ / (sx0_ * sy0_); break;
            case CoefficientId::tau_b_mod: v = 4.0 / 9.0 * base_ / (sx0_ * sy0_); break;
            case CoefficientId::pearson: v = pearson_base_; break;
        }
        return {id, v, IndependenceMode::ts};
    }

private:
    double tie_factor() const {
        if (zeta_x_ >= 1.0 || zeta_y_ >= 1.0)
            throw degenerate_margin("independence variance: unit tie probability");
        return (1.0 - zeta_x_) * (1.0 - zeta_y_);
    }

    double base_ = 0.0;          // weighted sum of Spearman ACF products
    double pearson_base_ = 0.0;  // weighted sum of moment ACF products
    double sx0_ = 0.0, sy0_ = 0.0;
    double zeta_x_ = 0.0, zeta_y_ = 0.0;
};

// Time-series case: Bartlett-weighted plug-in of Spearman (or grade, or
// moment) autocorrelations, two-sided via rho(-h) = rho(h). The lag-0 term
// enters with weight 1; the rho_b denominator is estimated once on the full
// sample.
inline IndependenceVariance sigma_ind_ts(CoefficientId id, std::span<const double> x,
                                         std::span<const double> y,
                                         const HacConfig& cfg) {
    return TsIndependenceTable(x, y, cfg).variance(id);
}

inline IndependenceVariance sigma_ind(CoefficientId id, const PairedSample& p,
                                      IndependenceMode mode, const HacConfig& cfg) {
    if (mode == IndependenceMode::iid)
        return sigma_ind_iid(id, tie_probabilities(p.x), tie_probabilities(p.y));
    return sigma_ind_ts(id, p.x, p.y, cfg);
}

}  // namespace rankcorr
