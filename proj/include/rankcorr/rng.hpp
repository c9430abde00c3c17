#pragma once

// Reproducible random number generation. Monte Carlo replication r draws from
// the stream derive_stream(seed, r), so parallel replications are independent
// and results do not depend on scheduling.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>

#include "rankcorr/core.hpp"

namespace rankcorr {

struct SplitMix64 {
    std::uint64_t state;

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

// xoshiro256++ seeded through SplitMix64
class Xoshiro256pp {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256pp(std::uint64_t seed) {
        SplitMix64 sm{seed};
        for (auto& w : s_) w = sm.next();
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
};

inline Xoshiro256pp derive_stream(std::uint64_t seed, std::uint64_t stream) {
    SplitMix64 sm{seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1))};
    return Xoshiro256pp(sm.next());
}

// Sampling front end: uniform bits from xoshiro, variates via standard
// constructions so that a fixed seed pins the whole sample path.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : eng_(seed) {}
    explicit RngStream(Xoshiro256pp eng) : eng_(eng) {}

    static RngStream derive(std::uint64_t seed, std::uint64_t stream) {
        return RngStream(derive_stream(seed, stream));
    }

    // uniform on [0, 1)
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    double exponential() { return -std::log1p(-uniform()); }

    // t(1) as a ratio of independent normals
    double student_t1() {
        double den = normal();
        while (den == 0.0) den = normal();
        return normal() / den;
    }

    // t(4) = Z / sqrt(V/4), V ~ chi^2(4) = 2 (E1 + E2)
    double student_t4() {
        const double v = 2.0 * (exponential() + exponential());
        return normal() / std::sqrt(v / 4.0);
    }

    bool bernoulli(double p) { return uniform() < p; }

    // Knuth multiplication method; fine for the small means used here
    std::int64_t poisson(double lambda) {
        const double limit = std::exp(-lambda);
        std::int64_t k = 0;
        double prod = uniform();
        while (prod > limit) {
            ++k;
            prod *= uniform();
        }
        return k;
    }

    // Geom(pi) on {0, 1, ...}: P(X = k) = pi (1-pi)^k
    std::int64_t geometric(double pi) {
        const double u = uniform();
        return static_cast<std::int64_t>(std::log1p(-u) / std::log1p(-pi));
    }

    std::int64_t binomial(std::int64_t n, double p) {
        if (n <= 0 || p <= 0.0) return 0;
        if (p >= 1.0) return n;
        if (n <= 64) {
            std::int64_t k = 0;
            for (std::int64_t i = 0; i < n; ++i) k += bernoulli(p);
            return k;
        }
        std::binomial_distribution<std::int64_t> dist(n, p);
        return dist(eng_);
    }

    // Zeta distribution on {1, 2, ...}: P(K = k) proportional to k^{-(s+1)}.
    // Devroye's rejection sampler; exact over the full support.
    std::int64_t zipf(double s) {
        const double a = s + 1.0;
        const double b = std::pow(2.0, a - 1.0);
        for (;;) {
            const double u = 1.0 - uniform();  // (0, 1]
            const double v = uniform();
            const double xr = std::floor(std::pow(u, -1.0 / (a - 1.0)));
            if (xr > 9.2e18 || !(xr >= 1.0)) continue;
            const double t = std::pow(1.0 + 1.0 / xr, a - 1.0);
            if (v * xr * (t - 1.0) / (b - 1.0) <= t / b)
                return static_cast<std::int64_t>(xr);
        }
    }

    std::int64_t skellam(double mu1, double mu2) {
        return poisson(mu1) - poisson(mu2);
    }

    Xoshiro256pp& engine() { return eng_; }

private:
    Xoshiro256pp eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// binomial thinning: alpha o x = sum of x Bernoulli(alpha) draws
inline std::int64_t binomial_thinning(double alpha, std::int64_t x, RngStream& rng) {
    if (alpha < 0.0 || alpha > 1.0) throw invalid_spec("thinning: alpha outside [0,1]");
    if (x < 0) throw invalid_spec("thinning: negative count");
    return rng.binomial(x, alpha);
}

// signed binomial thinning: sgn(alpha) sgn(x) Binomial(|x|, |alpha|)
inline std::int64_t signed_thinning(double alpha, std::int64_t x, RngStream& rng) {
    if (alpha < -1.0 || alpha > 1.0) throw invalid_spec("thinning: alpha outside [-1,1]");
    const std::int64_t draw = rng.binomial(std::abs(x), std::abs(alpha));
    const int sign = (alpha > 0.0 ? 1 : (alpha < 0.0 ? -1 : 0)) *
                     (x > 0 ? 1 : (x < 0 ? -1 : 0));
    return sign * draw;
}

}  // namespace rankcorr
