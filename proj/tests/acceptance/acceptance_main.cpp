// Acceptance suite: one pass/fail line per criterion. Exact and analytic
// criteria run first, then the Monte Carlo reproductions at study scale and
// the distributional property checks.

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "rankcorr/rankcorr.hpp"

using namespace rankcorr;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& label, const std::string& detail) {
    std::printf("%s  criterion %2d  %-38s %s\n", pass ? "PASS" : "FAIL", id,
                label.c_str(), detail.c_str());
    if (!pass) ++failures;
}

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

PairedSample random_mixed_sample(RngStream& rng, std::size_t n) {
    Series x(n), y(n);
    const bool tied = rng.uniform() < 0.5;
    for (std::size_t i = 0; i < n; ++i) {
        if (tied) {
            const int base = static_cast<int>(rng.uniform() * 4);
            x[i] = static_cast<double>(base + static_cast<int>(rng.uniform() * 3));
            y[i] = static_cast<double>(base + static_cast<int>(rng.uniform() * 3));
        } else {
            x[i] = rng.normal();
            y[i] = rng.normal();
        }
    }
    return PairedSample(std::move(x), std::move(y));
}

// --- criterion 1: U-statistic identity for Spearman's rho -------------------

void criterion_1() {
    RngStream rng(101);
    double worst = 0.0;
    for (int rep = 0; rep < 1000; ++rep) {
        const std::size_t n = 3 + static_cast<std::size_t>(rng.uniform() * 58);
        const PairedSample p = random_mixed_sample(rng, n);
        const double nn = static_cast<double>(n);
        const double gap = std::abs(spearman_rho(p) -
                                    (nn - 1.0) * (nn - 2.0) / (nn * nn) * rho_tilde(p) -
                                    3.0 * (nn - 1.0) / (nn * nn) * kendall_tau(p));
        worst = std::max(worst, gap);
    }
    report(1, worst < 1e-12, "order-3 identity for Spearman's rho",
           fmt("max |gap| = %.2e over 1000 samples (< 1e-12)", worst));
}

// --- criterion 2: worked-example battery ------------------------------------

void criterion_2() {
    const PairedSample tied({1, 2, 2}, {1, 2, 3});
    const PairedSample diag({1, 2, 3}, {1, 2, 3});
    const double tau = kendall_tau(tied);
    const double gamma = goodman_kruskal_gamma(tied);
    const double s_tau = coefficient_variance(diag, CoefficientId::tau, VarianceMode::iid);
    const double s_rho = coefficient_variance(diag, CoefficientId::rho, VarianceMode::iid);
    const double s_hac =
        coefficient_variance(diag, CoefficientId::tau, VarianceMode::hac, HacConfig{2});
    const bool pass = std::abs(tau - 2.0 / 3.0) < 1e-12 && std::abs(gamma - 1.0) < 1e-12 &&
                      std::abs(s_tau - 4.0 / 9.0) < 1e-12 && std::abs(s_rho) < 1e-12 &&
                      std::abs(s_hac - 76.0 / 81.0) < 1e-12;
    report(2, pass, "worked-example battery",
           fmt("tau=%.12f gamma=%.12f s_tau=%.12f s_rho=%.2e s_hac=%.12f", tau, gamma,
               s_tau, s_rho, s_hac));
}

// --- criterion 3: independence-variance constants ----------------------------

void criterion_3() {
    const TieProbabilities cont{0.0, 0.0};
    const TieProbabilities tied{0.4, 0.2};
    const bool pass =
        sigma_ind_iid(CoefficientId::tau, cont, cont).value == 4.0 / 9.0 &&
        sigma_ind_iid(CoefficientId::rho, cont, cont).value == 1.0 &&
        sigma_ind_iid(CoefficientId::rho_b, tied, tied).value == 1.0 &&
        sigma_ind_iid(CoefficientId::tau_b_mod, tied, tied).value == 4.0 / 9.0;
    report(3, pass, "independence-variance constants",
           "tau 4/9, rho 1 (continuous); rho_b 1, tau_b_mod 4/9 (any margins)");
}

// --- criterion 4: bivariate geometric closed forms vs PMF sums ---------------

void criterion_4() {
    constexpr int cutoff = 320;
    double worst = 0.0;
    bool rho_exact = true;
    for (double pi_x : {0.2, 0.5, 0.8})
        for (double pi_y : {0.2, 0.5, 0.8})
            for (double alpha : {-1.0, 0.0, 1.0}) {
                const BGeomParams par{pi_x, pi_y, alpha};
                const BGeomMoments m = bgeom_moments(par);
                std::vector<double> pmf(static_cast<std::size_t>(cutoff) * cutoff);
                std::vector<double> px(cutoff, 0.0), py(cutoff, 0.0);
                double pair_tie = 0.0;
                for (int x = 0; x < cutoff; ++x)
                    for (int y = 0; y < cutoff; ++y) {
                        const double p = bgeom_pmf(par, x, y);
                        pmf[static_cast<std::size_t>(x) * cutoff + y] = p;
                        px[static_cast<std::size_t>(x)] += p;
                        py[static_cast<std::size_t>(y)] += p;
                        pair_tie += p * p;
                    }
                double zx = 0.0, z2x = 0.0, zy = 0.0, z2y = 0.0;
                for (int v = 0; v < cutoff; ++v) {
                    zx += px[v] * px[v];
                    z2x += px[v] * px[v] * px[v];
                    zy += py[v] * py[v];
                    z2y += py[v] * py[v] * py[v];
                }
                const double nu = zx + zy - pair_tie;
                // tau from the bivariate MDF built by prefix-summing the PMF
                std::vector<double> cdf(pmf.size());
                for (int x = 0; x < cutoff; ++x)
                    for (int y = 0; y < cutoff; ++y) {
                        double c = pmf[static_cast<std::size_t>(x) * cutoff + y];
                        if (x > 0) c += cdf[static_cast<std::size_t>(x - 1) * cutoff + y];
                        if (y > 0) c += cdf[static_cast<std::size_t>(x) * cutoff + y - 1];
                        if (x > 0 && y > 0)
                            c -= cdf[static_cast<std::size_t>(x - 1) * cutoff + y - 1];
                        cdf[static_cast<std::size_t>(x) * cutoff + y] = c;
                    }
                const auto cdf_at = [&](int x, int y) {
                    if (x < 0 || y < 0) return 0.0;
                    return cdf[static_cast<std::size_t>(x) * cutoff + y];
                };
                double tau = 0.0;
                for (int x = 0; x < cutoff; ++x)
                    for (int y = 0; y < cutoff; ++y) {
                        const double g = 0.25 * (cdf_at(x, y) + cdf_at(x - 1, y) +
                                                 cdf_at(x, y - 1) + cdf_at(x - 1, y - 1));
                        tau += pmf[static_cast<std::size_t>(x) * cutoff + y] * g;
                    }
                tau = 4.0 * tau - 1.0;
                worst = std::max({worst, std::abs(zx - m.zeta_x), std::abs(z2x - m.zeta2_x),
                                  std::abs(zy - m.zeta_y), std::abs(z2y - m.zeta2_y),
                                  std::abs(nu - m.nu), std::abs(tau - m.tau)});
                rho_exact = rho_exact && m.rho == 1.5 * m.tau;
            }
    report(4, worst < 1e-8 && rho_exact, "bivariate geometric closed forms",
           fmt("max |closed form - PMF sum| = %.2e (< 1e-8), rho = 1.5 tau exact: %s",
               worst, rho_exact ? "yes" : "no"));
}

// --- criterion 5: delta-method ratio variance vs gradient form ---------------

void criterion_5() {
    RngStream rng(105);
    double worst = 0.0;
    for (int rep = 0; rep < 1000; ++rep) {
        const double c = 1.8 * rng.uniform() - 0.9;
        const double cX = 0.1 + 0.9 * rng.uniform();
        const double cY = 0.1 + 0.9 * rng.uniform();
        const double s[6] = {rng.uniform(),       rng.uniform() - 0.5,
                             rng.uniform() - 0.5, rng.uniform(),
                             rng.uniform(),       rng.uniform() - 0.5};
        const double direct =
            delta_variance_ratio3(c, cX, cY, s[0], s[1], s[2], s[3], s[4], s[5]);
        const double j0 = 1.0 / std::sqrt(cX * cY);
        const double j1 = -0.5 * c / (std::pow(cX, 1.5) * std::sqrt(cY));
        const double j2 = -0.5 * c / (std::pow(cY, 1.5) * std::sqrt(cX));
        const double sigma[3][3] = {{s[0], s[1], s[2]}, {s[1], s[3], s[5]}, {s[2], s[5], s[4]}};
        const double j[3] = {j0, j1, j2};
        double oracle = 0.0;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) oracle += j[a] * sigma[a][b] * j[b];
        worst = std::max(worst, std::abs(direct - oracle));
    }
    report(5, worst < 1e-12, "delta-method ratio variance",
           fmt("max |direct - J Sigma J'| = %.2e over 1000 inputs (< 1e-12)", worst));
}

// --- Monte Carlo reproductions ------------------------------------------------

StudyResult run_size(DgpFamily family, double alpha, std::size_t n,
                     std::vector<CoefficientId> coefs, std::uint64_t seed) {
    StudySpec s;
    s.dgp.family = family;
    s.dgp.alpha = alpha;
    s.dgp.n = n;
    s.dgp.seed = seed;
    s.coefficients = std::move(coefs);
    s.task = StudyTask::size_power;
    s.mc = 1000;
    s.level = 0.90;
    return run_study(s);
}

double run_coverage(DgpFamily family, double alpha, std::size_t n, CoefficientId coef,
                    double truth, bool fisher, VarianceMode vmode, std::uint64_t seed) {
    StudySpec s;
    s.dgp.family = family;
    s.dgp.alpha = alpha;
    s.dgp.n = n;
    s.dgp.seed = seed;
    s.coefficients = {coef};
    s.task = StudyTask::coverage;
    s.mc = 1000;
    s.level = 0.90;
    s.fisher = fisher;
    s.variance_mode = vmode;
    s.true_values = {truth};
    return run_study(s).cells[0].rate;
}

void criterion_6() {
    const StudyResult gauss = run_size(
        DgpFamily::gauss_iid, 0.0, 200,
        {CoefficientId::pearson, CoefficientId::tau, CoefficientId::rho}, 106);
    const double r1 = gauss.cells[0].rate, t1 = gauss.cells[1].rate,
                 h1 = gauss.cells[2].rate;
    const StudyResult cauchy = run_size(DgpFamily::t1_iid, 0.0, 800,
                                        {CoefficientId::pearson, CoefficientId::tau}, 1061);
    const double r2 = cauchy.cells[0].rate, t2 = cauchy.cells[1].rate;
    const bool pass = std::abs(r1 - 0.104) <= 0.03 && std::abs(t1 - 0.108) <= 0.03 &&
                      std::abs(h1 - 0.106) <= 0.03 && std::abs(r2 - 0.026) <= 0.03 &&
                      std::abs(t2 - 0.095) <= 0.03;
    report(6, pass, "size, continuous iid",
           fmt("gauss n=200: r %.3f tau %.3f rho %.3f (0.104/0.108/0.106); "
               "t1 n=800: r %.3f tau %.3f (0.026/0.095), all +-0.03",
               r1, t1, h1, r2, t2));
}

void criterion_7() {
    const double alpha = std::sin(0.05 * std::numbers::pi);  // tau = 0.1
    const StudyResult r =
        run_size(DgpFamily::gauss_iid, alpha, 800, {CoefficientId::tau}, 107);
    const double rate = r.cells[0].rate;
    report(7, rate >= 0.96, "power, continuous iid",
           fmt("gauss n=800 tau=0.1: rejection %.3f (>= 0.96, reference 0.997)", rate));
}

void criterion_8() {
    const StudyResult r = run_size(DgpFamily::pois_iid, 0.0, 200,
                                   {CoefficientId::gamma, CoefficientId::rho_b}, 108);
    const double g = r.cells[0].rate, b = r.cells[1].rate;
    const bool pass = std::abs(g - 0.094) <= 0.03 && std::abs(b - 0.097) <= 0.03;
    report(8, pass, "size, discrete iid",
           fmt("pois n=200: gamma %.3f rho_b %.3f (0.094/0.097 +-0.03)", g, b));
}

void criterion_9() {
    const double cov0 = run_coverage(DgpFamily::gauss_iid, 0.0, 800, CoefficientId::tau,
                                     0.0, false, VarianceMode::iid, 109);
    const double alpha4 = std::sin(0.2 * std::numbers::pi);  // tau = 0.4
    const double cov4 = run_coverage(DgpFamily::gauss_iid, alpha4, 800, CoefficientId::tau,
                                     0.4, false, VarianceMode::iid, 1091);

    DgpSpec pois;
    pois.family = DgpFamily::pois_iid;
    CalibrationOptions calib;
    calib.n = 400000;
    const double alpha_g = calibrate_alpha(pois, CoefficientId::gamma, 0.8, calib);
    const double truth_g = dgp_coefficient(pois, CoefficientId::gamma, alpha_g, 1000000, 42);
    const double cov_f = run_coverage(DgpFamily::pois_iid, alpha_g, 50, CoefficientId::gamma,
                                      truth_g, true, VarianceMode::iid, 1092);
    const double cov_p = run_coverage(DgpFamily::pois_iid, alpha_g, 50, CoefficientId::gamma,
                                      truth_g, false, VarianceMode::iid, 1092);

    const bool pass = std::abs(cov0 - 0.900) <= 0.03 && std::abs(cov4 - 0.889) <= 0.03 &&
                      std::abs(cov_f - 0.868) <= 0.04 && cov_f > cov_p;
    report(9, pass, "coverage, iid",
           fmt("gauss n=800 tau 0/0.4: %.3f/%.3f (0.900/0.889 +-0.03); pois gamma=0.8 "
               "n=50: fisher %.3f (0.868 +-0.04) > plain %.3f",
               cov0, cov4, cov_f, cov_p));
}

void criterion_10() {
    const double cov50 = run_coverage(DgpFamily::gauss_ar, 0.0, 50, CoefficientId::tau,
                                      0.0, false, VarianceMode::hac, 110);
    const double cov800 = run_coverage(DgpFamily::gauss_ar, 0.0, 800, CoefficientId::tau,
                                       0.0, false, VarianceMode::hac, 1101);
    const bool pass = std::abs(cov50 - 0.729) <= 0.05 && std::abs(cov800 - 0.857) <= 0.05;
    report(10, pass, "coverage distortion, time series",
           fmt("gauss-ar tau=0: n=50 %.3f (0.729 +-0.05), n=800 %.3f (0.857 +-0.05)",
               cov50, cov800));
}

void criterion_11() {
    const StudyResult r = run_size(DgpFamily::gauss_ar, 0.0, 800, {CoefficientId::tau}, 111);
    const double rate = r.cells[0].rate;
    report(11, std::abs(rate - 0.137) <= 0.04, "independence-test size, time series",
           fmt("gauss-ar n=800 tau=0: rejection %.3f (0.137 +-0.04)", rate));
}

// --- criterion 12: null distribution of the standardized statistic -----------

void criterion_12() {
    const int reps = 2000;
    const std::size_t n = 2000;
    std::vector<double> z(reps);
    for (int rep = 0; rep < reps; ++rep) {
        DgpSpec d;
        d.family = DgpFamily::gauss_iid;
        d.alpha = 0.0;
        d.n = n;
        d.seed = detail::derive_seed(112, static_cast<std::uint64_t>(rep));
        const PairedSample p = simulate(d);
        const double sigma2 =
            sigma_ind_iid(CoefficientId::tau, tie_probabilities(p.x), tie_probabilities(p.y))
                .value;
        z[rep] = std::sqrt(static_cast<double>(n)) * kendall_tau(p) / std::sqrt(sigma2);
    }
    std::sort(z.begin(), z.end());
    double d_stat = 0.0;
    for (int i = 0; i < reps; ++i) {
        const double f = normal_cdf(z[static_cast<std::size_t>(i)]);
        d_stat = std::max(d_stat, std::max(f - static_cast<double>(i) / reps,
                                           static_cast<double>(i + 1) / reps - f));
    }
    const double m = static_cast<double>(reps);
    const double lambda = (std::sqrt(m) + 0.12 + 0.11 / std::sqrt(m)) * d_stat;
    double p_value = 0.0;
    for (int k = 1; k <= 100; ++k)
        p_value += 2.0 * (k % 2 ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
    report(12, p_value > 0.01, "null distribution (Kolmogorov-Smirnov)",
           fmt("2000 reps, n=2000: D = %.4f, p = %.3f (> 0.01)", d_stat, p_value));
}

// --- criterion 13: HAC consistency --------------------------------------------

void criterion_13() {
    const auto sigma_tau_hac = [](std::size_t n, std::uint64_t seed) {
        DgpSpec d;
        d.family = DgpFamily::gauss_ar;
        d.alpha = 0.3;
        d.n = n;
        d.seed = seed;
        const PairedSample p = simulate(d);
        const InfluenceSeries k = k1_tau(p);
        return sigma_hac(k, k, HacConfig::default_for(n)).value;
    };
    const auto median_of = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        const std::size_t m = v.size();
        return m % 2 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
    };
    std::vector<double> ref_vals;
    for (int r = 0; r < 7; ++r)
        ref_vals.push_back(sigma_tau_hac(32000, detail::derive_seed(113, 1000 + r)));
    const double ref = median_of(ref_vals);
    std::vector<double> mad;
    for (std::size_t n : {std::size_t{500}, std::size_t{2000}, std::size_t{8000}}) {
        std::vector<double> devs;
        for (int r = 0; r < 31; ++r)
            devs.push_back(std::abs(sigma_tau_hac(n, detail::derive_seed(113, 100 * n + r)) - ref));
        mad.push_back(median_of(devs));
    }
    const bool pass = mad[0] > mad[1] && mad[1] > mad[2];
    report(13, pass, "HAC consistency trend",
           fmt("MAD from n=32000 reference (%.4f): n=500 %.4f > n=2000 %.4f > n=8000 %.4f",
               ref, mad[0], mad[1], mad[2]));
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    criterion_12();
    criterion_13();
    if (failures) {
        std::printf("\n%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("\nall 13 criteria passed\n");
    return 0;
}
