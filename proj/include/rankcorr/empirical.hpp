#pragma once

// Empirical distribution primitives: CDFs with left limits, mid-distribution
// functions, midranks, PMFs and tie probabilities. Ties are resolved by exact
// value equality; data carrying float noise must be pre-rounded by the caller.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "rankcorr/core.hpp"

namespace rankcorr {

// Sorted unique values with counts. CDF queries are O(log n) so that O(n)
// kernel sweeps stay O(n log n).
class EmpiricalDistribution {
public:
    explicit EmpiricalDistribution(std::span<const double> data) {
        validate_series(data, 1, "empirical distribution");
        std::vector<double> sorted(data.begin(), data.end());
        std::sort(sorted.begin(), sorted.end());
        n_ = static_cast<std::int64_t>(sorted.size());
        for (std::size_t i = 0; i < sorted.size();) {
            std::size_t j = i;
            while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
            values_.push_back(sorted[i]);
            cum_.push_back(static_cast<std::int64_t>(j));
            i = j;
        }
    }

    // P(X <= x)
    double cdf(double x) const {
        return static_cast<double>(count_le(x)) / static_cast<double>(n_);
    }

    // P(X < x)
    double cdf_left(double x) const {
        return static_cast<double>(count_lt(x)) / static_cast<double>(n_);
    }

    // (cdf(x) + cdf_left(x)) / 2
    double mdf(double x) const {
        return static_cast<double>(count_le(x) + count_lt(x)) /
               (2.0 * static_cast<double>(n_));
    }

    // relative frequency of x
    double pmf(double x) const {
        return static_cast<double>(count_le(x) - count_lt(x)) /
               static_cast<double>(n_);
    }

    std::int64_t n() const { return n_; }
    const std::vector<double>& unique_values() const { return values_; }

    std::int64_t count_at(std::size_t k) const {
        return cum_[k] - (k > 0 ? cum_[k - 1] : 0);
    }

private:
    std::int64_t count_le(double x) const {
        auto it = std::upper_bound(values_.begin(), values_.end(), x);
        return it == values_.begin() ? 0 : cum_[it - values_.begin() - 1];
    }
    std::int64_t count_lt(double x) const {
        auto it = std::lower_bound(values_.begin(), values_.end(), x);
        return it == values_.begin() ? 0 : cum_[it - values_.begin() - 1];
    }

    std::vector<double> values_;      // sorted distinct values
    std::vector<std::int64_t> cum_;   // cumulative counts
    std::int64_t n_ = 0;
};

// Midranks per observation: R(X_j) = 1/2 + sum_i H(X_j - X_i) with the
// half-maximum Heaviside. The midranks always sum to n(n+1)/2.
inline std::vector<double> midranks(std::span<const double> data) {
    validate_series(data, 1, "midranks");
    const std::size_t n = data.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return data[a] < data[b]; });
    std::vector<double> ranks(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && data[order[j]] == data[order[i]]) ++j;
        const double r = 0.5 * static_cast<double>(i + 1 + j);  // average of ranks i+1..j
        for (std::size_t k = i; k < j; ++k) ranks[order[k]] = r;
        i = j;
    }
    return ranks;
}

// Empirical MDF evaluated at each observation: G(X_j) = (R(X_j) - 1/2) / n.
inline std::vector<double> grade_values(std::span<const double> data) {
    std::vector<double> g = midranks(data);
    const double n = static_cast<double>(data.size());
    for (double& v : g) v = (v - 0.5) / n;
    return g;
}

struct TieProbabilities {
    double zeta = 0.0;   // P(X = X')
    double zeta2 = 0.0;  // P(X = X' = X'')
};

// Frequency plug-in for the tie probabilities: zeta = sum p^2, zeta2 = sum p^3.
// Tie-free data yields zeta = 1/n and zeta2 = 1/n^2, not 0.
inline TieProbabilities tie_probabilities(std::span<const double> data) {
    validate_series(data, 1, "tie probabilities");
    std::vector<double> sorted(data.begin(), data.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    TieProbabilities t;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        const double p = static_cast<double>(j - i) / n;
        t.zeta += p * p;
        t.zeta2 += p * p * p;
        i = j;
    }
    return t;
}

// Joint empirical distribution of n observed pairs. Point queries scan the
// pair list (O(n)); batch evaluation at the observed pairs themselves should
// go through joint_mdf_at_points instead.
class EmpiricalJoint {
public:
    explicit EmpiricalJoint(const PairedSample& p) : n_(static_cast<std::int64_t>(p.size())) {
        pairs_.reserve(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) pairs_.emplace_back(p.x[i], p.y[i]);
        std::sort(pairs_.begin(), pairs_.end());
    }

    // F(x, y) and its three left-limit variants
    double cdf(double x, double y) const { return count(x, y, false, false); }
    double cdf_left_x(double x, double y) const { return count(x, y, true, false); }
    double cdf_left_y(double x, double y) const { return count(x, y, false, true); }
    double cdf_left_xy(double x, double y) const { return count(x, y, true, true); }

    // G(x,y) = 1/4 (F(x,y) + F(x-,y) + F(x,y-) + F(x-,y-))
    double mdf(double x, double y) const {
        std::int64_t c = 0;
        for (const auto& [px, py] : pairs_) {
            if (px > x) break;
            const int hx = px < x ? 2 : (px == x ? 1 : 0);
            const int hy = py < y ? 2 : (py == y ? 1 : 0);
            c += static_cast<std::int64_t>(hx) * hy;
        }
        return static_cast<double>(c) / (4.0 * static_cast<double>(n_));
    }

    double pmf(double x, double y) const {
        auto [lo, hi] = std::equal_range(pairs_.begin(), pairs_.end(),
                                         std::pair<double, double>(x, y));
        return static_cast<double>(hi - lo) / static_cast<double>(n_);
    }

    std::int64_t n() const { return n_; }

private:
    double count(double x, double y, bool strict_x, bool strict_y) const {
        std::int64_t c = 0;
        for (const auto& [px, py] : pairs_) {
            if (px > x) break;
            if (strict_x && px == x) continue;
            if (strict_y ? (py < y) : (py <= y)) ++c;
        }
        return static_cast<double>(c) / static_cast<double>(n_);
    }

    std::vector<std::pair<double, double>> pairs_;  // sorted lexicographically
    std::int64_t n_ = 0;
};

namespace detail {

class Fenwick {
public:
    explicit Fenwick(std::size_t size) : tree_(size + 1, 0) {}

    // 1-based position
    void add(std::size_t pos) {
        for (; pos < tree_.size(); pos += pos & (~pos + 1)) ++tree_[pos];
    }

    // count of inserted positions <= pos; prefix(0) == 0
    std::int64_t prefix(std::size_t pos) const {
        std::int64_t s = 0;
        for (; pos > 0; pos -= pos & (~pos + 1)) s += tree_[pos];
        return s;
    }

private:
    std::vector<std::int64_t> tree_;
};

// Dense 1-based ranks of the values (equal values share a rank).
inline std::vector<std::size_t> dense_ranks(std::span<const double> data,
                                            std::size_t* n_distinct = nullptr) {
    std::vector<double> sorted(data.begin(), data.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<std::size_t> r(data.size());
    for (std::size_t i = 0; i < data.size(); ++i)
        r[i] = static_cast<std::size_t>(
                   std::lower_bound(sorted.begin(), sorted.end(), data[i]) - sorted.begin()) +
               1;
    if (n_distinct) *n_distinct = sorted.size();
    return r;
}

// Reference implementation of the bivariate MDF at the observed pairs, O(n^2).
inline std::vector<double> joint_mdf_at_points_naive(const PairedSample& p) {
    const std::size_t n = p.size();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::int64_t c = 0;
        for (std::size_t j = 0; j < n; ++j) {
            const int hx = p.x[j] < p.x[i] ? 2 : (p.x[j] == p.x[i] ? 1 : 0);
            const int hy = p.y[j] < p.y[i] ? 2 : (p.y[j] == p.y[i] ? 1 : 0);
            c += static_cast<std::int64_t>(hx) * hy;
        }
        out[i] = static_cast<double>(c) / (4.0 * static_cast<double>(n));
    }
    return out;
}

}  // namespace detail

// Bivariate MDF at every observed pair, O(n log n) via a Fenwick sweep over
// the x-sorted points. Must agree exactly with the naive double loop.
inline std::vector<double> joint_mdf_at_points(const PairedSample& p) {
    const std::size_t n = p.size();
    std::size_t n_ranks = 0;
    const std::vector<std::size_t> yr = detail::dense_ranks(p.y, &n_ranks);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return p.x[a] < p.x[b]; });

    detail::Fenwick bit(n_ranks);
    std::vector<std::int64_t> corners(n, 0);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && p.x[order[j]] == p.x[order[i]]) ++j;
        for (std::size_t k = i; k < j; ++k) {  // pairs with X_j' < X_k
            const std::size_t idx = order[k];
            corners[idx] += bit.prefix(yr[idx]) + bit.prefix(yr[idx] - 1);
        }
        for (std::size_t k = i; k < j; ++k) bit.add(yr[order[k]]);
        for (std::size_t k = i; k < j; ++k) {  // pairs with X_j' <= X_k
            const std::size_t idx = order[k];
            corners[idx] += bit.prefix(yr[idx]) + bit.prefix(yr[idx] - 1);
        }
        i = j;
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = static_cast<double>(corners[i]) / (4.0 * static_cast<double>(n));
    return out;
}

}  // namespace rankcorr
