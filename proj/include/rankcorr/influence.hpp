#pragma once

// Plug-in estimation of the leading Hoeffding projection k1 of each
// U-statistic, evaluated at the observed pairs. These series feed both the
// iid and the long-run variance estimators. All probabilities are in-sample
// relative frequencies; out-of-sample query points are not supported.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "rankcorr/core.hpp"
#include "rankcorr/empirical.hpp"
#include "rankcorr/estimators.hpp"

namespace rankcorr {

enum class KernelId { tau, rho, nu, tau_x, tau_y, rho_x, rho_y };

constexpr int kernel_order(KernelId k) {
    switch (k) {
        case KernelId::tau:
        case KernelId::nu:
        case KernelId::tau_x:
        case KernelId::tau_y: return 2;
        case KernelId::rho:
        case KernelId::rho_x:
        case KernelId::rho_y: return 3;
    }
    return 0;
}

struct InfluenceSeries {
    KernelId kernel;
    int order;
    std::vector<double> values;  // k1 evaluated at (X_i, Y_i), i = 1..n
};

namespace detail {

// per-observation relative frequency of the own value
inline std::vector<double> pmf_at_points(std::span<const double> s) {
    std::size_t n_ranks = 0;
    const std::vector<std::size_t> r = dense_ranks(s, &n_ranks);
    std::vector<std::int64_t> counts(n_ranks + 1, 0);
    for (std::size_t rank : r) ++counts[rank];
    std::vector<double> out(s.size());
    const double n = static_cast<double>(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        out[i] = static_cast<double>(counts[r[i]]) / n;
    return out;
}

inline std::vector<double> joint_pmf_at_points(const PairedSample& p) {
    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) pairs.emplace_back(p.x[i], p.y[i]);
    std::vector<std::pair<double, double>> sorted = pairs;
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(p.size());
    std::vector<double> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        auto [lo, hi] = std::equal_range(sorted.begin(), sorted.end(), pairs[i]);
        out[i] = static_cast<double>(hi - lo) / n;
    }
    return out;
}

// g_X(x) = (1/n) sum_i G_{X,Y}(x, Y_i) at each observed x, by a double sweep
// over the unique-value grid: per unique x the inner pass revisits every
// unique y once, with integer corner counts maintained incrementally.
// O(u * v) time, O(n) memory.
inline std::vector<double> g_bar_at_points_sweep(std::span<const double> x,
                                                 std::span<const double> y) {
    const std::size_t n = x.size();
    std::size_t vy = 0;
    const std::vector<std::size_t> yr = dense_ranks(y, &vy);
    std::vector<std::int64_t> cy(vy + 1, 0);  // multiplicity of each y rank
    for (std::size_t r : yr) ++cy[r];

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });

    // row_sum(cnt) = sum_k cy[k] * (C[k] + C[k-1]) with C = prefix sums of cnt
    std::vector<std::int64_t> cnt(vy + 1, 0);
    const auto row_sum = [&]() {
        std::int64_t run = 0, acc = 0;
        for (std::size_t k = 1; k <= vy; ++k) {
            const std::int64_t prev = run;
            run += cnt[k];
            acc += cy[k] * (run + prev);
        }
        return acc;
    };

    std::vector<double> out(n);
    const double scale = 4.0 * static_cast<double>(n) * static_cast<double>(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && x[order[j]] == x[order[i]]) ++j;
        const std::int64_t strict = row_sum();  // pairs with X < current x
        for (std::size_t k = i; k < j; ++k) ++cnt[yr[order[k]]];
        const std::int64_t weak = row_sum();  // pairs with X <= current x
        const double g = static_cast<double>(strict + weak) / scale;
        for (std::size_t k = i; k < j; ++k) out[order[k]] = g;
        i = j;
    }
    return out;
}

// Same estimator through the exact prefix identity
//   g_X(x) = (1/(2n)) [ S(<= x) + S(< x) ],  S(c) = sum_{j: X_j c} (1 - G_Y(Y_j)),
// which follows by swapping the two summations in the definition. O(n log n);
// used when the unique-value grid gets too large for the sweep.
inline std::vector<double> g_bar_at_points_prefix(std::span<const double> x,
                                                  std::span<const double> y) {
    const std::size_t n = x.size();
    const std::vector<double> gy = grade_values(y);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> out(n);
    double below = 0.0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        double group = 0.0;
        while (j < n && x[order[j]] == x[order[i]]) {
            group += 1.0 - gy[order[j]];
            ++j;
        }
        const double g = (2.0 * below + group) / (2.0 * static_cast<double>(n));
        for (std::size_t k = i; k < j; ++k) out[order[k]] = g;
        below += group;
        i = j;
    }
    return out;
}

inline std::size_t count_distinct(std::span<const double> v) {
    std::vector<double> s(v.begin(), v.end());
    std::sort(s.begin(), s.end());
    return static_cast<std::size_t>(std::unique(s.begin(), s.end()) - s.begin());
}

inline std::vector<double> g_bar_at_points(std::span<const double> x,
                                           std::span<const double> y) {
    constexpr double grid_cap = 1e8;
    const double grid = static_cast<double>(count_distinct(x)) *
                        static_cast<double>(count_distinct(y));
    if (grid > grid_cap) return g_bar_at_points_prefix(x, y);
    return g_bar_at_points_sweep(x, y);
}

// brute-force reference: g_X(x_i) via pointwise bivariate MDF queries, O(n^3)
inline std::vector<double> g_bar_at_points_naive(const PairedSample& p, bool margin_x) {
    const EmpiricalJoint joint(p);
    const std::size_t n = p.size();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            acc += margin_x ? joint.mdf(p.x[i], p.y[j]) : joint.mdf(p.x[j], p.y[i]);
        out[i] = acc / static_cast<double>(n);
    }
    return out;
}

}  // namespace detail

// k1_tau(x, y) = 4 G_{X,Y}(x, y) - 2 (G_X(x) + G_Y(y)) + 1 - tau
inline InfluenceSeries k1_tau(const PairedSample& p) {
    detail::check_paired(p.x, p.y, 2);
    const std::vector<double> g = joint_mdf_at_points(p);
    const std::vector<double> gx = grade_values(p.x);
    const std::vector<double> gy = grade_values(p.y);
    const double tau = kendall_tau(p);
    InfluenceSeries s{KernelId::tau, 2, std::vector<double>(p.size())};
    for (std::size_t i = 0; i < p.size(); ++i)
        s.values[i] = 4.0 * g[i] - 2.0 * (gx[i] + gy[i]) + 1.0 - tau;
    return s;
}

// k1_rho(x, y) = 4 (g_X(x) + g_Y(y) + G_X(x) G_Y(y) - G_X(x) - G_Y(y)) + 1 - rho
inline InfluenceSeries k1_rho(const PairedSample& p) {
    detail::check_paired(p.x, p.y, 2);
    const std::vector<double> gbx = detail::g_bar_at_points(p.x, p.y);
    const std::vector<double> gby = detail::g_bar_at_points(p.y, p.x);
    const std::vector<double> gx = grade_values(p.x);
    const std::vector<double> gy = grade_values(p.y);
    const double rho = spearman_rho(p);
    InfluenceSeries s{KernelId::rho, 3, std::vector<double>(p.size())};
    for (std::size_t i = 0; i < p.size(); ++i)
        s.values[i] =
            4.0 * (gbx[i] + gby[i] + gx[i] * gy[i] - gx[i] - gy[i]) + 1.0 - rho;
    return s;
}

// k1_nu(x, y) = P(X=x) + P(Y=y) - P(X=x, Y=y) - nu
inline InfluenceSeries k1_nu(const PairedSample& p) {
    detail::check_paired(p.x, p.y, 2);
    const std::vector<double> px = detail::pmf_at_points(p.x);
    const std::vector<double> py = detail::pmf_at_points(p.y);
    const std::vector<double> pxy = detail::joint_pmf_at_points(p);
    const double nu = nu_hat(p);
    InfluenceSeries s{KernelId::nu, 2, std::vector<double>(p.size())};
    for (std::size_t i = 0; i < p.size(); ++i)
        s.values[i] = px[i] + py[i] - pxy[i] - nu;
    return s;
}

enum class Margin { x, y };

// k1_tau_X(x) = 1 - tau(X,X) - P(X=x)
inline InfluenceSeries k1_tau_margin(std::span<const double> s, Margin which) {
    validate_series(s, 2, "k1_tau_margin");
    const double tau_self = kendall_tau(s, s);
    const std::vector<double> pm = detail::pmf_at_points(s);
    InfluenceSeries out{which == Margin::x ? KernelId::tau_x : KernelId::tau_y, 2,
                        std::vector<double>(s.size())};
    for (std::size_t i = 0; i < s.size(); ++i)
        out.values[i] = 1.0 - tau_self - pm[i];
    return out;
}

// k1_rho_X(x) = 1 - rho(X,X) - P(X=x)^2
inline InfluenceSeries k1_rho_margin(std::span<const double> s, Margin which) {
    validate_series(s, 2, "k1_rho_margin");
    const double rho_self = spearman_rho(s, s);
    const std::vector<double> pm = detail::pmf_at_points(s);
    InfluenceSeries out{which == Margin::x ? KernelId::rho_x : KernelId::rho_y, 3,
                        std::vector<double>(s.size())};
    for (std::size_t i = 0; i < s.size(); ++i)
        out.values[i] = 1.0 - rho_self - pm[i] * pm[i];
    return out;
}

inline InfluenceSeries influence_series(KernelId k, const PairedSample& p) {
    switch (k) {
        case KernelId::tau: return k1_tau(p);
        case KernelId::rho: return k1_rho(p);
        case KernelId::nu: return k1_nu(p);
        case KernelId::tau_x: return k1_tau_margin(p.x, Margin::x);
        case KernelId::tau_y: return k1_tau_margin(p.y, Margin::y);
        case KernelId::rho_x: return k1_rho_margin(p.x, Margin::x);
        case KernelId::rho_y: return k1_rho_margin(p.y, Margin::y);
    }
    throw invalid_spec("unknown kernel");
}

}  // namespace rankcorr
