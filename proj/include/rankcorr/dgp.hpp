#pragma once

// Data-generating processes for the simulation study, the bivariate geometric
// closed forms used as analytic oracles, and dependence-parameter calibration.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "rankcorr/core.hpp"
#include "rankcorr/estimators.hpp"
#include "rankcorr/rng.hpp"

namespace rankcorr {

enum class DgpFamily {
    gauss_iid,
    t4_iid,
    t1_iid,
    gauss_exp_iid,
    pois_iid,
    zipf_iid,
    skellam_iid,
    gauss_ar,
    t4_ar,
    t1_ar,
    tear1,
    pois_inar,
    zipf_inar,
    skellam_inars,
    bgeom_iid,
};

inline const char* dgp_family_name(DgpFamily f) {
    switch (f) {
        case DgpFamily::gauss_iid: return "gauss-iid";
        case DgpFamily::t4_iid: return "t4-iid";
        case DgpFamily::t1_iid: return "t1-iid";
        case DgpFamily::gauss_exp_iid: return "gauss-exp-iid";
        case DgpFamily::pois_iid: return "pois-iid";
        case DgpFamily::zipf_iid: return "zipf-iid";
        case DgpFamily::skellam_iid: return "skellam-iid";
        case DgpFamily::gauss_ar: return "gauss-ar";
        case DgpFamily::t4_ar: return "t4-ar";
        case DgpFamily::t1_ar: return "t1-ar";
        case DgpFamily::tear1: return "tear1";
        case DgpFamily::pois_inar: return "pois-inar";
        case DgpFamily::zipf_inar: return "zipf-inar";
        case DgpFamily::skellam_inars: return "skellam-inars";
        case DgpFamily::bgeom_iid: return "bgeom-iid";
    }
    return "?";
}

inline bool is_time_series_family(DgpFamily f) {
    switch (f) {
        case DgpFamily::gauss_ar:
        case DgpFamily::t4_ar:
        case DgpFamily::t1_ar:
        case DgpFamily::tear1:
        case DgpFamily::pois_inar:
        case DgpFamily::zipf_inar:
        case DgpFamily::skellam_inars: return true;
        default: return false;
    }
}

// thinning families use alpha in [0,1], the others a signed alpha in (-1,1)
inline bool is_thinning_family(DgpFamily f) {
    switch (f) {
        case DgpFamily::pois_iid:
        case DgpFamily::zipf_iid:
        case DgpFamily::tear1:
        case DgpFamily::pois_inar:
        case DgpFamily::zipf_inar: return true;
        default: return false;
    }
}

struct DgpSpec {
    DgpFamily family = DgpFamily::gauss_iid;
    double alpha = 0.0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    int prerun = -1;      // -1: family default (0 for iid, 1000 for AR/INAR)
    double pi_x = 0.5;    // bgeom only
    double pi_y = 0.5;    // bgeom only
};

inline int default_prerun(DgpFamily f) { return is_time_series_family(f) ? 1000 : 0; }

inline void validate_spec(const DgpSpec& spec) {
    if (spec.n < 2) throw invalid_spec("dgp: n must be >= 2");
    const double a = spec.alpha;
    if (is_thinning_family(spec.family)) {
        if (a < 0.0 || a > 1.0)
            throw invalid_spec("dgp: alpha outside [0,1] for thinning family");
    } else if (spec.family == DgpFamily::skellam_iid ||
               spec.family == DgpFamily::skellam_inars ||
               spec.family == DgpFamily::bgeom_iid) {
        if (a < -1.0 || a > 1.0) throw invalid_spec("dgp: alpha outside [-1,1]");
    } else {
        if (a <= -1.0 || a >= 1.0) throw invalid_spec("dgp: alpha outside (-1,1)");
    }
    if (spec.family == DgpFamily::bgeom_iid &&
        (spec.pi_x <= 0.0 || spec.pi_x >= 1.0 || spec.pi_y <= 0.0 || spec.pi_y >= 1.0))
        throw invalid_spec("dgp: bgeom pi parameters must lie in (0,1)");
}

namespace detail {

// quantile of Geom(pi) on {0, 1, ...}
inline std::int64_t geometric_quantile(double pi, double u) {
    if (u <= 0.0) return 0;
    const double k = std::ceil(std::log1p(-u) / std::log1p(-pi)) - 1.0;
    return k < 0.0 ? 0 : static_cast<std::int64_t>(k);
}

// conditional inversion of the FGM copula: V | U = u
inline double fgm_conditional(double alpha, double u, double w) {
    const double a = alpha * (1.0 - 2.0 * u);
    if (std::abs(a) < 1e-12) return w;
    const double b = 1.0 + a;
    return (b - std::sqrt(b * b - 4.0 * a * w)) / (2.0 * a);
}

inline double upper_exponential_quantile(double w) {
    // F^{-1}_Exp(Phi(w)) = -log(1 - Phi(w)), evaluated through the upper tail
    return -std::log(0.5 * std::erfc(w / std::numbers::sqrt2));
}

}  // namespace detail

// Deterministic function of the spec (including seed). AR/INAR families run
// the configured prerun before recording.
inline PairedSample simulate(const DgpSpec& spec) {
    validate_spec(spec);
    RngStream rng{Xoshiro256pp(spec.seed)};
    const double a = spec.alpha;
    const std::size_t n = spec.n;
    const int prerun = spec.prerun >= 0 ? spec.prerun : default_prerun(spec.family);
    Series x(n), y(n);

    switch (spec.family) {
        case DgpFamily::gauss_iid:
        case DgpFamily::t4_iid:
        case DgpFamily::t1_iid: {
            const double rest = std::sqrt(1.0 - a * a);
            for (std::size_t i = 0; i < n; ++i) {
                double xi = 0.0, ui = 0.0;
                if (spec.family == DgpFamily::gauss_iid) {
                    xi = rng.normal();
                    ui = rng.normal();
                } else if (spec.family == DgpFamily::t4_iid) {
                    xi = rng.student_t4();
                    ui = rng.student_t4();
                } else {
                    xi = rng.student_t1();
                    ui = rng.student_t1();
                }
                x[i] = xi;
                y[i] = a * xi + rest * ui;
            }
            break;
        }
        case DgpFamily::gauss_exp_iid: {
            const double rest = std::sqrt(1.0 - a * a);
            for (std::size_t i = 0; i < n; ++i) {
                const double xi = rng.normal();
                const double w = a * xi + rest * rng.normal();
                x[i] = xi;
                y[i] = detail::upper_exponential_quantile(w);
            }
            break;
        }
        case DgpFamily::pois_iid:
        case DgpFamily::zipf_iid: {
            for (std::size_t i = 0; i < n; ++i) {
                std::int64_t xi = 0, ui = 0;
                if (spec.family == DgpFamily::pois_iid) {
                    xi = rng.poisson(1.0);
                    ui = rng.poisson(1.0);
                } else {
                    xi = rng.zipf(1.0) - 1;
                    ui = rng.zipf(1.0) - 1;
                }
                x[i] = static_cast<double>(xi);
                y[i] = static_cast<double>(binomial_thinning(a, xi, rng) +
                                           binomial_thinning(1.0 - a, ui, rng));
            }
            break;
        }
        case DgpFamily::skellam_iid: {
            const double s = a >= 0.0 ? 1.0 : -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                const std::int64_t xi = rng.skellam(1.0, 1.0);
                const std::int64_t ui = rng.skellam(1.0, 1.0);
                x[i] = static_cast<double>(xi);
                y[i] = static_cast<double>(
                    signed_thinning(a, xi, rng) +
                    static_cast<std::int64_t>(s) *
                        signed_thinning(1.0 - std::abs(a), ui, rng));
            }
            break;
        }
        case DgpFamily::gauss_ar:
        case DgpFamily::t4_ar:
        case DgpFamily::t1_ar: {
            const double rest = std::sqrt(1.0 - a * a);
            const auto innov = [&]() {
                if (spec.family == DgpFamily::gauss_ar) return rng.normal();
                if (spec.family == DgpFamily::t4_ar) return rng.student_t4();
                return rng.student_t1();
            };
            double xs = 0.0, us = 0.0;
            if (spec.family == DgpFamily::gauss_ar) {
                const double sd = 1.0 / std::sqrt(1.0 - 0.64);  // stationary N(0, 1/0.36)
                xs = sd * rng.normal();
                us = sd * rng.normal();
            }
            for (int t = 0; t < prerun; ++t) {
                xs = 0.8 * xs + innov();
                us = 0.8 * us + innov();
            }
            for (std::size_t i = 0; i < n; ++i) {
                xs = 0.8 * xs + innov();
                us = 0.8 * us + innov();
                x[i] = xs;
                y[i] = a * xs + rest * us;
            }
            break;
        }
        case DgpFamily::tear1: {
            double xs = rng.exponential(), us = rng.exponential();  // Exp(1) is stationary
            const auto step = [&](double s) {
                return (rng.bernoulli(0.8) ? s : 0.0) + 0.2 * rng.exponential();
            };
            for (int t = 0; t < prerun; ++t) {
                xs = step(xs);
                us = step(us);
            }
            for (std::size_t i = 0; i < n; ++i) {
                xs = step(xs);
                us = step(us);
                x[i] = xs;
                y[i] = rng.bernoulli(a) ? xs : us;
            }
            break;
        }
        case DgpFamily::pois_inar:
        case DgpFamily::zipf_inar: {
            std::int64_t xs = 0, us = 0;
            if (spec.family == DgpFamily::pois_inar) {
                xs = rng.poisson(1.0);  // stationary Poi(1)
                us = rng.poisson(1.0);
            }
            const auto step = [&](std::int64_t s) {
                const std::int64_t thinned = binomial_thinning(0.8, s, rng);
                return thinned + (spec.family == DgpFamily::pois_inar
                                      ? rng.poisson(0.2)
                                      : rng.zipf(1.5));
            };
            for (int t = 0; t < prerun; ++t) {
                xs = step(xs);
                us = step(us);
            }
            for (std::size_t i = 0; i < n; ++i) {
                xs = step(xs);
                us = step(us);
                x[i] = static_cast<double>(xs);
                y[i] = static_cast<double>(binomial_thinning(a, xs, rng) +
                                           binomial_thinning(1.0 - a, us, rng));
            }
            break;
        }
        case DgpFamily::skellam_inars: {
            const double s = a >= 0.0 ? 1.0 : -1.0;
            std::int64_t xs = 0, us = 0;
            const auto step = [&](std::int64_t v) {
                return signed_thinning(0.8, v, rng) + rng.skellam(0.2, 0.2);
            };
            for (int t = 0; t < prerun; ++t) {
                xs = step(xs);
                us = step(us);
            }
            for (std::size_t i = 0; i < n; ++i) {
                xs = step(xs);
                us = step(us);
                x[i] = static_cast<double>(xs);
                y[i] = static_cast<double>(
                    signed_thinning(a, xs, rng) +
                    static_cast<std::int64_t>(s) *
                        signed_thinning(1.0 - std::abs(a), us, rng));
            }
            break;
        }
        case DgpFamily::bgeom_iid: {
            for (std::size_t i = 0; i < n; ++i) {
                const double u = rng.uniform();
                const double v = detail::fgm_conditional(a, u, rng.uniform());
                x[i] = static_cast<double>(detail::geometric_quantile(spec.pi_x, u));
                y[i] = static_cast<double>(detail::geometric_quantile(spec.pi_y, v));
            }
            break;
        }
    }
    return PairedSample(std::move(x), std::move(y));
}

// ---------------------------------------------------------------------------
// Bivariate geometric distribution: FGM copula over Geom(pi_x), Geom(pi_y)
// margins. All quantities below are exact closed forms.

struct BGeomParams {
    double pi_x = 0.5;
    double pi_y = 0.5;
    double alpha = 0.0;
};

struct BGeomMoments {
    double zeta_x = 0.0, zeta2_x = 0.0;
    double zeta_y = 0.0, zeta2_y = 0.0;
    double nu = 0.0;
    double tau = 0.0, rho = 0.0;
    double gamma = 0.0, tau_b = 0.0, rho_b = 0.0;
};

namespace detail {

inline void validate_bgeom(const BGeomParams& p) {
    if (p.pi_x <= 0.0 || p.pi_x >= 1.0 || p.pi_y <= 0.0 || p.pi_y >= 1.0)
        throw invalid_spec("bgeom: pi parameters must lie in (0,1)");
    if (p.alpha < -1.0 || p.alpha > 1.0) throw invalid_spec("bgeom: alpha outside [-1,1]");
}

inline double geom_cdf(double pi, std::int64_t x) {
    return x < 0 ? 0.0 : 1.0 - std::pow(1.0 - pi, static_cast<double>(x) + 1.0);
}

inline double geom_mdf(double pi, std::int64_t x) {
    return x < 0 ? 0.0
                 : 0.5 * (2.0 - (2.0 - pi) * std::pow(1.0 - pi, static_cast<double>(x)));
}

}  // namespace detail

inline double bgeom_cdf(const BGeomParams& p, std::int64_t x, std::int64_t y) {
    detail::validate_bgeom(p);
    if (x < 0 || y < 0) return 0.0;
    const double qx = std::pow(1.0 - p.pi_x, static_cast<double>(x) + 1.0);
    const double qy = std::pow(1.0 - p.pi_y, static_cast<double>(y) + 1.0);
    return (1.0 - qx) * (1.0 - qy) * (1.0 + p.alpha * qx * qy);
}

inline double bgeom_pmf(const BGeomParams& p, std::int64_t x, std::int64_t y) {
    detail::validate_bgeom(p);
    if (x < 0 || y < 0) return 0.0;
    const double qx = std::pow(1.0 - p.pi_x, static_cast<double>(x));
    const double qy = std::pow(1.0 - p.pi_y, static_cast<double>(y));
    return p.pi_x * qx * p.pi_y * qy *
           (1.0 + p.alpha * ((2.0 - p.pi_x) * qx - 1.0) * ((2.0 - p.pi_y) * qy - 1.0));
}

inline double bgeom_mdf(const BGeomParams& p, std::int64_t x, std::int64_t y) {
    detail::validate_bgeom(p);
    if (x < 0 || y < 0) return 0.0;
    const double gx = detail::geom_mdf(p.pi_x, x);
    const double gy = detail::geom_mdf(p.pi_y, y);
    const double qx = std::pow(1.0 - p.pi_x, static_cast<double>(x));
    const double qy = std::pow(1.0 - p.pi_y, static_cast<double>(y));
    const double fx = detail::geom_cdf(p.pi_x, x - 1);
    const double fy = detail::geom_cdf(p.pi_y, y - 1);
    return gx * gy + p.alpha * qx * qy * (0.5 * p.pi_x * fx + (1.0 - p.pi_x) * gx) *
                         (0.5 * p.pi_y * fy + (1.0 - p.pi_y) * gy);
}

inline BGeomMoments bgeom_moments(const BGeomParams& p) {
    detail::validate_bgeom(p);
    const auto zeta = [](double pi) { return pi / (2.0 - pi); };
    const auto zeta2 = [](double pi) { return pi * pi / (3.0 - (3.0 - pi) * pi); };
    BGeomMoments m;
    m.zeta_x = zeta(p.pi_x);
    m.zeta2_x = zeta2(p.pi_x);
    m.zeta_y = zeta(p.pi_y);
    m.zeta2_y = zeta2(p.pi_y);
    const double cx = 1.0 - p.pi_x, cy = 1.0 - p.pi_y;
    m.tau = 2.0 * p.alpha * cx * cy /
            ((3.0 - (3.0 - p.pi_x) * p.pi_x) * (3.0 - (3.0 - p.pi_y) * p.pi_y));
    m.rho = 1.5 * m.tau;
    m.nu = 1.0 - (1.0 - m.zeta_x) * (1.0 - m.zeta_y) *
                     (1.0 + p.alpha * m.zeta2_x * m.zeta2_y / (p.pi_x * p.pi_y) *
                                (0.5 + p.alpha * cx * cy /
                                           ((1.0 + cx * cx) * (1.0 + cy * cy))));
    m.gamma = m.tau / (1.0 - m.nu);
    m.tau_b = m.tau / std::sqrt((1.0 - m.zeta_x) * (1.0 - m.zeta_y));
    m.rho_b = m.rho / std::sqrt((1.0 - m.zeta2_x) * (1.0 - m.zeta2_y));
    return m;
}

// ---------------------------------------------------------------------------
// Calibration of the dependence parameter to a target coefficient value.

struct CalibrationOptions {
    std::size_t n = 400000;        // sample size per bisection evaluation
    double tol = 0.005;            // required closeness of the final check
    std::uint64_t seed = 0x9A2C17;
    std::string cache_path;        // empty disables the on-disk cache
    bool force_bisection = false;  // skip closed forms; used to validate bisection
};

namespace detail {

inline std::string calibration_key(DgpFamily family, CoefficientId coef, double target) {
    std::ostringstream os;
    os << dgp_family_name(family) << ' ' << coefficient_name(coef) << ' ';
    os.precision(6);
    os << std::fixed << target;
    return os.str();
}

inline std::map<std::string, double> load_calibration_cache(const std::string& path) {
    std::map<std::string, double> cache;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string family, coef, target;
        double alpha = 0.0;
        if (ls >> family >> coef >> target >> alpha)
            cache[family + ' ' + coef + ' ' + target] = alpha;
    }
    return cache;
}

inline void append_calibration_cache(const std::string& path, const std::string& key,
                                     double alpha) {
    const bool fresh = !std::ifstream(path).good();
    std::ofstream out(path, std::ios::app);
    if (!out) return;
    if (fresh) out << "# rankcorr calibration cache v1\n# family coefficient target alpha\n";
    out.precision(10);
    out << key << ' ' << alpha << '\n';
}

}  // namespace detail

// High-precision Monte Carlo evaluation of a coefficient under a DGP.
inline double dgp_coefficient(const DgpSpec& templ, CoefficientId coef, double alpha,
                              std::size_t n, std::uint64_t seed) {
    DgpSpec spec = templ;
    spec.alpha = alpha;
    spec.n = n;
    spec.seed = seed;
    return coefficient(coef, simulate(spec));
}

// alpha such that the large-sample coefficient hits the target. Closed forms
// for the Gaussian families, bisection with common random numbers otherwise.
inline double calibrate_alpha(const DgpSpec& templ, CoefficientId coef, double target,
                              const CalibrationOptions& opt = {}) {
    const DgpFamily family = templ.family;
    if (target == 0.0) return 0.0;  // alpha = 0 gives independence in every family
    if (!opt.force_bisection) {
        if (family == DgpFamily::gauss_iid || family == DgpFamily::gauss_ar) {
            // (X_i, Y_i) is bivariate normal with correlation alpha
            if (coef == CoefficientId::tau)
                return std::sin(0.5 * std::numbers::pi * target);
            if (coef == CoefficientId::rho)
                return 2.0 * std::sin(std::numbers::pi * target / 6.0);
            if (coef == CoefficientId::pearson) return target;
        }
        if (family == DgpFamily::bgeom_iid &&
            (coef == CoefficientId::tau || coef == CoefficientId::rho)) {
            // tau is linear in alpha for the FGM construction
            BGeomParams p{templ.pi_x, templ.pi_y, 1.0};
            const double at_one =
                coef == CoefficientId::tau ? bgeom_moments(p).tau : bgeom_moments(p).rho;
            const double alpha = target / at_one;
            if (alpha < -1.0 || alpha > 1.0)
                throw target_unattainable("bgeom: target outside attainable range");
            return alpha;
        }
    }

    const std::string key = detail::calibration_key(family, coef, target);
    std::map<std::string, double> cache;
    if (!opt.cache_path.empty()) {
        cache = detail::load_calibration_cache(opt.cache_path);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }

    double lo = is_thinning_family(family) ? 0.0 : -0.999;
    double hi = is_thinning_family(family) ? 1.0 : 0.999;
    const auto eval = [&](double alpha) {
        return dgp_coefficient(templ, coef, alpha, opt.n, opt.seed);
    };
    double clo = eval(lo), chi = eval(hi);
    if ((target < clo - opt.tol && target < chi - opt.tol) ||
        (target > clo + opt.tol && target > chi + opt.tol))
        throw target_unattainable(std::string("calibration: target out of range for ") +
                                  dgp_family_name(family));
    const bool increasing = chi >= clo;
    for (int it = 0; it < 26; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double c = eval(mid);
        if ((c < target) == increasing)
            lo = mid;
        else
            hi = mid;
    }
    const double alpha = 0.5 * (lo + hi);
    if (!opt.cache_path.empty()) detail::append_calibration_cache(opt.cache_path, key, alpha);
    return alpha;
}

}  // namespace rankcorr
