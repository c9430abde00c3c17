#pragma once

// Monte Carlo harness for size/power and coverage experiments. Replication r
// draws from the stream derived from (seed, r), results are written into
// per-replication slots and aggregated afterwards, so rates are identical at
// any worker count.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "rankcorr/core.hpp"
#include "rankcorr/dgp.hpp"
#include "rankcorr/independence.hpp"
#include "rankcorr/inference.hpp"
#include "rankcorr/variance.hpp"

namespace rankcorr {

enum class StudyTask { size_power, coverage };
enum class NullMode { independence, general };

struct StudySpec {
    DgpSpec dgp;  // template: n, alpha and seed are taken from here
    std::vector<CoefficientId> coefficients;
    StudyTask task = StudyTask::size_power;
    int mc = 1000;
    double level = 0.90;
    bool fisher = false;                            // coverage only
    VarianceMode variance_mode = VarianceMode::iid; // coverage / general tests
    NullMode null_mode = NullMode::independence;    // size_power only
    std::optional<int> bandwidth;                   // HAC bandwidth override
    std::vector<double> true_values;                // coverage: aligned with coefficients
    unsigned threads = 0;                           // 0 = hardware concurrency
};

struct StudyCellResult {
    CoefficientId id;
    double rate = 0.0;      // rejection or coverage rate over valid replications
    double se = 0.0;        // sqrt(rate (1-rate) / valid)
    int valid = 0;
    int errors = 0;         // replications that raised a statistical error
};

struct StudyResult {
    std::vector<StudyCellResult> cells;
};

namespace detail {

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    SplitMix64 sm{seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1))};
    return sm.next();
}

}  // namespace detail

inline StudyResult run_study(const StudySpec& spec) {
    if (spec.mc < 1) throw invalid_spec("study: mc must be >= 1");
    if (!(spec.level > 0.0 && spec.level < 1.0)) throw invalid_spec("study: bad level");
    if (spec.coefficients.empty()) throw invalid_spec("study: no coefficients");
    if (spec.task == StudyTask::coverage &&
        spec.true_values.size() != spec.coefficients.size())
        throw invalid_spec("study: coverage needs one true value per coefficient");

    const std::size_t n_coef = spec.coefficients.size();
    const std::size_t mc = static_cast<std::size_t>(spec.mc);
    // 0 = success/no, 1 = success/yes (reject or cover), 2 = statistical error
    std::vector<std::uint8_t> outcome(n_coef * mc, 0);

    const HacConfig hac = spec.bandwidth ? HacConfig{*spec.bandwidth}
                                         : HacConfig::default_for(spec.dgp.n);
    const IndependenceMode ind_mode = is_time_series_family(spec.dgp.family)
                                          ? IndependenceMode::ts
                                          : IndependenceMode::iid;
    const double alpha_level = 1.0 - spec.level;

    const auto run_replication = [&](std::size_t rep) {
        DgpSpec d = spec.dgp;
        d.seed = detail::derive_seed(spec.dgp.seed, rep);
        const PairedSample sample = simulate(d);
        // independence-variance ingredients are shared across coefficients
        std::optional<TsIndependenceTable> ts_table;
        std::optional<std::pair<TieProbabilities, TieProbabilities>> ties;
        if (spec.task == StudyTask::size_power &&
            spec.null_mode == NullMode::independence) {
            try {
                if (ind_mode == IndependenceMode::ts)
                    ts_table.emplace(sample.x, sample.y, hac);
                else
                    ties.emplace(tie_probabilities(sample.x), tie_probabilities(sample.y));
            } catch (const error&) {
                for (std::size_t c = 0; c < n_coef; ++c) outcome[c * mc + rep] = 2;
                return;
            }
        }
        for (std::size_t c = 0; c < n_coef; ++c) {
            const CoefficientId id = spec.coefficients[c];
            std::uint8_t& out = outcome[c * mc + rep];
            try {
                const double est = coefficient(id, sample);
                if (spec.task == StudyTask::size_power) {
                    double sigma2 = 0.0;
                    TestVarianceMode tmode = TestVarianceMode::independence;
                    if (spec.null_mode == NullMode::independence) {
                        sigma2 = ts_table ? ts_table->variance(id).value
                                          : sigma_ind_iid(id, ties->first, ties->second)
                                                .value;
                    } else {
                        sigma2 = coefficient_variance(sample, id, spec.variance_mode, hac);
                        tmode = TestVarianceMode::general;
                    }
                    const TestResult t = coefficient_test(
                        est, sigma2, static_cast<std::int64_t>(sample.size()), 0.0, tmode);
                    out = t.p_value <= alpha_level ? 1 : 0;
                } else {
                    const double sigma2 =
                        coefficient_variance(sample, id, spec.variance_mode, hac);
                    const ConfidenceInterval ci = confidence_interval(
                        est, sigma2, static_cast<std::int64_t>(sample.size()), spec.level,
                        spec.fisher);
                    const double truth = spec.true_values[c];
                    out = (ci.lower <= truth && truth <= ci.upper) ? 1 : 0;
                }
            } catch (const error&) {
                out = 2;
            }
        }
    };

    unsigned workers = spec.threads ? spec.threads : std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, mc));
    if (workers <= 1) {
        for (std::size_t rep = 0; rep < mc; ++rep) run_replication(rep);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&]() {
                for (;;) {
                    const std::size_t rep = next.fetch_add(1);
                    if (rep >= mc) return;
                    run_replication(rep);
                }
            });
        for (auto& t : pool) t.join();
    }

    StudyResult result;
    result.cells.reserve(n_coef);
    for (std::size_t c = 0; c < n_coef; ++c) {
        StudyCellResult cell;
        cell.id = spec.coefficients[c];
        std::int64_t yes = 0;
        for (std::size_t rep = 0; rep < mc; ++rep) {
            const std::uint8_t out = outcome[c * mc + rep];
            if (out == 2)
                ++cell.errors;
            else {
                ++cell.valid;
                yes += out;
            }
        }
        if (cell.valid > 0) {
            cell.rate = static_cast<double>(yes) / static_cast<double>(cell.valid);
            cell.se = std::sqrt(cell.rate * (1.0 - cell.rate) /
                                static_cast<double>(cell.valid));
        }
        result.cells.push_back(cell);
    }
    return result;
}

// CSV rows: dgp, coefficient, n, target, rate, se, mc (plus error count)
inline std::string study_csv_header() {
    return "dgp,coefficient,n,target,rate,se,mc,errors";
}

inline std::string study_csv_row(const StudySpec& spec, const StudyCellResult& cell,
                                 double target) {
    std::ostringstream os;
    os.precision(6);
    os << dgp_family_name(spec.dgp.family) << ',' << coefficient_name(cell.id) << ','
       << spec.dgp.n << ',' << target << ',' << cell.rate << ',' << cell.se << ','
       << spec.mc << ',' << cell.errors;
    return os.str();
}

}  // namespace rankcorr
