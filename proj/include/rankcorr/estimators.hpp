#pragma once

// Point estimators of the dependence coefficients and the rank-based
// autocorrelation functions. Kendall-type statistics are accumulated as exact
// integer counts, so the merge-sort path and the naive pair enumeration yield
// bit-identical results.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "rankcorr/core.hpp"
#include "rankcorr/empirical.hpp"

namespace rankcorr {

enum class CoefficientId { tau, rho, gamma, tau_b, rho_b, tau_b_mod, pearson };

inline const char* coefficient_name(CoefficientId id) {
    switch (id) {
        case CoefficientId::tau: return "tau";
        case CoefficientId::rho: return "rho";
        case CoefficientId::gamma: return "gamma";
        case CoefficientId::tau_b: return "tau_b";
        case CoefficientId::rho_b: return "rho_b";
        case CoefficientId::tau_b_mod: return "tau_b_mod";
        case CoefficientId::pearson: return "pearson";
    }
    return "?";
}

namespace detail {

// sum over i<j of sgn(x_i - x_j) * sgn(y_i - y_j), by pair enumeration
inline std::int64_t kendall_s_naive(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    std::int64_t s = 0;
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            s += static_cast<std::int64_t>(sgn(x[i] - x[j])) * sgn(y[i] - y[j]);
    return s;
}

// strict inversions (a_i > a_j for i < j) counted by bottom-up merge sort
inline std::int64_t count_inversions(std::vector<double>& a) {
    const std::size_t n = a.size();
    std::vector<double> buf(n);
    std::int64_t inv = 0;
    for (std::size_t width = 1; width < n; width *= 2) {
        for (std::size_t lo = 0; lo + width < n; lo += 2 * width) {
            const std::size_t mid = lo + width;
            const std::size_t hi = std::min(lo + 2 * width, n);
            std::size_t i = lo, j = mid, k = lo;
            while (i < mid && j < hi) {
                if (a[j] < a[i]) {
                    inv += static_cast<std::int64_t>(mid - i);
                    buf[k++] = a[j++];
                } else {
                    buf[k++] = a[i++];
                }
            }
            while (i < mid) buf[k++] = a[i++];
            while (j < hi) buf[k++] = a[j++];
            std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo),
                      buf.begin() + static_cast<std::ptrdiff_t>(hi),
                      a.begin() + static_cast<std::ptrdiff_t>(lo));
        }
    }
    return inv;
}

inline std::int64_t tie_pairs_1d(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::int64_t t = 0;
    for (std::size_t i = 0; i < v.size();) {
        std::size_t j = i;
        while (j < v.size() && v[j] == v[i]) ++j;
        const std::int64_t c = static_cast<std::int64_t>(j - i);
        t += c * (c - 1) / 2;
        i = j;
    }
    return t;
}

struct PairCounts {
    std::int64_t total = 0;      // n(n-1)/2
    std::int64_t tied_x = 0;     // pairs with x_i == x_j
    std::int64_t tied_y = 0;
    std::int64_t tied_both = 0;  // pairs tied in both coordinates
};

inline PairCounts pair_counts(std::span<const double> x, std::span<const double> y) {
    const std::int64_t n = static_cast<std::int64_t>(x.size());
    PairCounts c;
    c.total = n * (n - 1) / 2;
    c.tied_x = tie_pairs_1d({x.begin(), x.end()});
    c.tied_y = tie_pairs_1d({y.begin(), y.end()});
    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) pairs.emplace_back(x[i], y[i]);
    std::sort(pairs.begin(), pairs.end());
    for (std::size_t i = 0; i < pairs.size();) {
        std::size_t j = i;
        while (j < pairs.size() && pairs[j] == pairs[i]) ++j;
        const std::int64_t cnt = static_cast<std::int64_t>(j - i);
        c.tied_both += cnt * (cnt - 1) / 2;
        i = j;
    }
    return c;
}

// Knight-style O(n log n) evaluation of the same integer sum:
// S = total - tied_x - tied_y + tied_both - 2 * (discordant pairs).
inline std::int64_t kendall_s_fast(std::span<const double> x, std::span<const double> y) {
    const PairCounts c = pair_counts(x, y);
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (x[a] != x[b]) return x[a] < x[b];
        return y[a] < y[b];
    });
    std::vector<double> ys(x.size());
    for (std::size_t i = 0; i < order.size(); ++i) ys[i] = y[order[i]];
    const std::int64_t discordant = count_inversions(ys);
    return c.total - c.tied_x - c.tied_y + c.tied_both - 2 * discordant;
}

inline std::int64_t kendall_s(std::span<const double> x, std::span<const double> y) {
    return x.size() <= 32 ? kendall_s_naive(x, y) : kendall_s_fast(x, y);
}

inline void check_paired(std::span<const double> x, std::span<const double> y,
                         std::size_t min_n) {
    if (x.size() != y.size()) throw invalid_spec("series lengths differ");
    if (x.size() < min_n)
        throw invalid_spec("need at least " + std::to_string(min_n) + " observations");
}

}  // namespace detail

inline double kendall_tau(std::span<const double> x, std::span<const double> y) {
    detail::check_paired(x, y, 2);
    const std::int64_t n = static_cast<std::int64_t>(x.size());
    return static_cast<double>(detail::kendall_s(x, y)) /
           static_cast<double>(n * (n - 1) / 2);
}

inline double kendall_tau(const PairedSample& p) { return kendall_tau(p.x, p.y); }

inline double spearman_rho(std::span<const double> x, std::span<const double> y) {
    detail::check_paired(x, y, 2);
    const std::vector<double> gx = grade_values(x);
    const std::vector<double> gy = grade_values(y);
    double acc = 0.0;
    for (std::size_t i = 0; i < gx.size(); ++i) acc += (gx[i] - 0.5) * (gy[i] - 0.5);
    return 12.0 * acc / static_cast<double>(x.size());
}

inline double spearman_rho(const PairedSample& p) { return spearman_rho(p.x, p.y); }

// Order-3 U-statistic version of Spearman's rho. O(n^3); intended as an exact
// reference for the identity linking it to spearman_rho and kendall_tau.
inline constexpr std::size_t rho_tilde_max_n = 500;

inline double rho_tilde(const PairedSample& p) {
    const std::size_t n = p.size();
    if (n < 3) throw invalid_spec("rho_tilde: need at least 3 observations");
    if (n > rho_tilde_max_n)
        throw sample_too_large("rho_tilde: n > " + std::to_string(rho_tilde_max_n));
    const double* x = p.x.data();
    const double* y = p.y.data();
    std::int64_t acc = 0;
    for (std::size_t i = 0; i + 2 < n; ++i)
        for (std::size_t j = i + 1; j + 1 < n; ++j)
            for (std::size_t o = j + 1; o < n; ++o) {
                acc += static_cast<std::int64_t>(sgn(x[i] - x[j])) * sgn(y[i] - y[o]) +
                       static_cast<std::int64_t>(sgn(x[i] - x[o])) * sgn(y[i] - y[j]) +
                       static_cast<std::int64_t>(sgn(x[j] - x[i])) * sgn(y[j] - y[o]) +
                       static_cast<std::int64_t>(sgn(x[j] - x[o])) * sgn(y[j] - y[i]) +
                       static_cast<std::int64_t>(sgn(x[o] - x[i])) * sgn(y[o] - y[j]) +
                       static_cast<std::int64_t>(sgn(x[o] - x[j])) * sgn(y[o] - y[i]);
            }
    const double triples = static_cast<double>(n) * static_cast<double>(n - 1) *
                           static_cast<double>(n - 2) / 6.0;
    return static_cast<double>(acc) / (2.0 * triples);
}

// fraction of pairs with a tie in x or y or both
inline double nu_hat(std::span<const double> x, std::span<const double> y) {
    detail::check_paired(x, y, 2);
    const detail::PairCounts c = detail::pair_counts(x, y);
    return static_cast<double>(c.tied_x + c.tied_y - c.tied_both) /
           static_cast<double>(c.total);
}

inline double nu_hat(const PairedSample& p) { return nu_hat(p.x, p.y); }

namespace detail {
inline double nu_hat_naive(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    std::int64_t tied = 0;
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if ((x[i] - x[j]) * (y[i] - y[j]) == 0.0) ++tied;
    return static_cast<double>(tied) /
           static_cast<double>(static_cast<std::int64_t>(n) * (n - 1) / 2);
}
}  // namespace detail

inline double goodman_kruskal_gamma(const PairedSample& p) {
    const double nu = nu_hat(p);
    if (nu >= 1.0) {
        if (tie_probabilities(p.x).zeta >= 1.0)
            throw degenerate_margin("gamma: degenerate margin x");
        if (tie_probabilities(p.y).zeta >= 1.0)
            throw degenerate_margin("gamma: degenerate margin y");
        throw degenerate_sample("gamma: every pair is tied (nu = 1)");
    }
    return kendall_tau(p) / (1.0 - nu);
}

inline double kendall_tau_b(const PairedSample& p) {
    const double tx = kendall_tau(p.x, p.x);
    if (tx <= 0.0) throw degenerate_margin("tau_b: degenerate margin x");
    const double ty = kendall_tau(p.y, p.y);
    if (ty <= 0.0) throw degenerate_margin("tau_b: degenerate margin y");
    return kendall_tau(p) / std::sqrt(tx * ty);
}

inline double grade_correlation(const PairedSample& p) {
    const double rx = spearman_rho(p.x, p.x);
    if (rx <= 0.0) throw degenerate_margin("rho_b: degenerate margin x");
    const double ry = spearman_rho(p.y, p.y);
    if (ry <= 0.0) throw degenerate_margin("rho_b: degenerate margin y");
    return spearman_rho(p) / std::sqrt(rx * ry);
}

inline double tau_b_mod(const PairedSample& p) {
    const double z2x = tie_probabilities(p.x).zeta2;
    if (z2x >= 1.0) throw degenerate_margin("tau_b_mod: degenerate margin x");
    const double z2y = tie_probabilities(p.y).zeta2;
    if (z2y >= 1.0) throw degenerate_margin("tau_b_mod: degenerate margin y");
    return kendall_tau(p) / std::sqrt((1.0 - z2x) * (1.0 - z2y));
}

inline double pearson_r(std::span<const double> x, std::span<const double> y) {
    detail::check_paired(x, y, 2);
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx <= 0.0) throw degenerate_margin("pearson: degenerate margin x");
    if (syy <= 0.0) throw degenerate_margin("pearson: degenerate margin y");
    return sxy / std::sqrt(sxx * syy);
}

inline double pearson_r(const PairedSample& p) { return pearson_r(p.x, p.y); }

// Spearman autocorrelation at lag h, estimated on the overlapped pairs
// (X_i, X_{i+h}).
inline double spearman_acf(std::span<const double> s, int h) {
    if (h < 0) throw invalid_spec("spearman_acf: negative lag");
    if (s.size() < static_cast<std::size_t>(h) + 2)
        throw lag_too_large("spearman_acf: lag " + std::to_string(h) +
                            " leaves fewer than 2 pairs");
    const std::size_t m = s.size() - static_cast<std::size_t>(h);
    return spearman_rho(s.first(m), s.subspan(static_cast<std::size_t>(h), m));
}

// Grade autocorrelation: spearman_acf divided by the full-sample rho(X,X).
inline double grade_acf(std::span<const double> s, int h) {
    const double self = spearman_rho(s, s);
    if (self <= 0.0) throw degenerate_margin("grade_acf: degenerate (constant) series");
    return spearman_acf(s, h) / self;
}

inline double coefficient(CoefficientId id, const PairedSample& p) {
    switch (id) {
        case CoefficientId::tau: return kendall_tau(p);
        case CoefficientId::rho: return spearman_rho(p);
        case CoefficientId::gamma: return goodman_kruskal_gamma(p);
        case CoefficientId::tau_b: return kendall_tau_b(p);
        case CoefficientId::rho_b: return grade_correlation(p);
        case CoefficientId::tau_b_mod: return tau_b_mod(p);
        case CoefficientId::pearson: return pearson_r(p);
    }
    throw invalid_spec("unknown coefficient");
}

}  // namespace rankcorr
