// Command line front end: coefficient/CI/test computation on CSV data,
// simulation of the built-in DGPs, and the Monte Carlo study harness.
//
// Exit codes: 0 success, 1 statistical/degenerate-data error, 2 I/O or parse
// error, 3 invalid flags.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rankcorr/rankcorr.hpp"

namespace rc = rankcorr;
using nlohmann::json;

namespace {

const std::map<std::string, rc::CoefficientId> coefficient_map{
    {"tau", rc::CoefficientId::tau},
    {"rho", rc::CoefficientId::rho},
    {"gamma", rc::CoefficientId::gamma},
    {"tau_b", rc::CoefficientId::tau_b},
    {"rho_b", rc::CoefficientId::rho_b},
    {"tau_b_mod", rc::CoefficientId::tau_b_mod},
    {"pearson", rc::CoefficientId::pearson},
};

const std::map<std::string, rc::DgpFamily> family_map{
    {"gauss-iid", rc::DgpFamily::gauss_iid},
    {"t4-iid", rc::DgpFamily::t4_iid},
    {"t1-iid", rc::DgpFamily::t1_iid},
    {"gauss-exp-iid", rc::DgpFamily::gauss_exp_iid},
    {"pois-iid", rc::DgpFamily::pois_iid},
    {"zipf-iid", rc::DgpFamily::zipf_iid},
    {"skellam-iid", rc::DgpFamily::skellam_iid},
    {"gauss-ar", rc::DgpFamily::gauss_ar},
    {"t4-ar", rc::DgpFamily::t4_ar},
    {"t1-ar", rc::DgpFamily::t1_ar},
    {"tear1", rc::DgpFamily::tear1},
    {"pois-inar", rc::DgpFamily::pois_inar},
    {"zipf-inar", rc::DgpFamily::zipf_inar},
    {"skellam-inars", rc::DgpFamily::skellam_inars},
    {"bgeom-iid", rc::DgpFamily::bgeom_iid},
};

struct CorrelateOptions {
    std::string input;
    std::vector<std::string> coefficients;
    std::string mode = "iid";
    double level = 0.90;
    bool fisher = true;
    double null_value = 0.0;
    int bandwidth = 0;  // 0 = default rule
    std::string format = "table";
    std::string out;
};

struct SimulateOptions {
    std::string dgp;
    double alpha = 0.0;
    std::size_t n = 0;
    std::uint64_t seed = 1;
    int prerun = -1;
    double pi_x = 0.5, pi_y = 0.5;
    std::string out;
};

struct StudyOptions {
    std::string dgp;
    std::string task = "size";
    std::vector<std::string> coefficients;
    std::optional<double> alpha;
    std::optional<double> target;
    std::string target_coefficient;
    std::vector<std::size_t> ns;
    int mc = 1000;
    double level = 0.90;
    bool fisher = false;
    std::string mode;  // empty = family default
    std::uint64_t seed = 1;
    int bandwidth = 0;
    std::vector<double> true_values;
    bool quick = false;
    unsigned threads = 0;
    std::string cache;
    std::string format = "csv";
    std::string out;
};

std::ostream& open_output(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw rc::io_error("cannot open output file: " + path);
    return file;
}

bool is_discrete_family(rc::DgpFamily f) {
    switch (f) {
        case rc::DgpFamily::pois_iid:
        case rc::DgpFamily::zipf_iid:
        case rc::DgpFamily::skellam_iid:
        case rc::DgpFamily::pois_inar:
        case rc::DgpFamily::zipf_inar:
        case rc::DgpFamily::skellam_inars:
        case rc::DgpFamily::bgeom_iid: return true;
        default: return false;
    }
}

struct CoefficientReport {
    rc::CoefficientId id;
    double estimate = 0.0;
    double variance = 0.0;
    rc::ConfidenceInterval ci;
    rc::TestResult general;
    rc::TestResult independence;
};

json report_to_json(const CoefficientReport& r, std::size_t n, const std::string& mode) {
    return json{{"coefficient", rc::coefficient_name(r.id)},
                {"n", n},
                {"estimate", r.estimate},
                {"variance", r.variance},
                {"variance_mode", mode},
                {"ci",
                 {{"lower", r.ci.lower},
                  {"upper", r.ci.upper},
                  {"level", r.ci.level},
                  {"fisher", r.ci.fisher}}},
                {"test_general", {{"statistic", r.general.statistic}, {"p", r.general.p_value}}},
                {"test_independence",
                 {{"statistic", r.independence.statistic}, {"p", r.independence.p_value}}}};
}

int run_correlate(const CorrelateOptions& opt) {
    rc::PairedSample sample = [&]() {
        if (opt.input.empty() || opt.input == "-") return rc::read_paired_csv(std::cin);
        std::ifstream in(opt.input);
        if (!in) throw rc::io_error("cannot open input file: " + opt.input);
        return rc::read_paired_csv(in);
    }();
    const std::size_t n = sample.size();
    const bool ts = opt.mode == "ts";
    const rc::VarianceMode vmode = ts ? rc::VarianceMode::hac : rc::VarianceMode::iid;
    const rc::HacConfig hac =
        opt.bandwidth > 0 ? rc::HacConfig{opt.bandwidth} : rc::HacConfig::default_for(n);

    std::vector<std::string> names = opt.coefficients;
    if (names.empty()) names = {"tau", "rho", "gamma", "tau_b", "rho_b", "pearson"};

    // independence-variance ingredients are shared across coefficients
    std::optional<rc::TsIndependenceTable> ts_table;
    std::optional<std::pair<rc::TieProbabilities, rc::TieProbabilities>> ties;
    if (ts)
        ts_table.emplace(sample.x, sample.y, hac);
    else
        ties.emplace(rc::tie_probabilities(sample.x), rc::tie_probabilities(sample.y));

    std::vector<CoefficientReport> reports;
    for (const std::string& name : names) {
        CoefficientReport r;
        r.id = coefficient_map.at(name);
        r.estimate = rc::coefficient(r.id, sample);
        r.variance = rc::coefficient_variance(sample, r.id, vmode, hac);
        const bool use_fisher = opt.fisher && std::abs(r.estimate) < 1.0;
        if (opt.fisher && !use_fisher)
            std::cerr << "note: " << name
                      << ": |estimate| = 1, the Fisher transform is undefined; "
                         "reporting the plain interval\n";
        r.ci = rc::confidence_interval(r.estimate, r.variance,
                                       static_cast<std::int64_t>(n), opt.level, use_fisher);
        r.general = rc::coefficient_test(r.estimate, r.variance,
                                         static_cast<std::int64_t>(n), opt.null_value,
                                         rc::TestVarianceMode::general);
        const double ind_var = ts_table
                                   ? ts_table->variance(r.id).value
                                   : rc::sigma_ind_iid(r.id, ties->first, ties->second)
                                         .value;
        r.independence = rc::coefficient_test(r.estimate, ind_var,
                                              static_cast<std::int64_t>(n), 0.0,
                                              rc::TestVarianceMode::independence);
        reports.push_back(r);
    }

    std::ofstream file;
    std::ostream& out = open_output(file, opt.out);
    if (opt.format == "json") {
        const auto to_json = [&](const CoefficientReport& r) {
            return report_to_json(r, n, ts ? "ts" : "iid");
        };
        if (reports.size() == 1) {
            out << to_json(reports.front()).dump(2) << '\n';
        } else {
            json arr = json::array();
            for (const CoefficientReport& r : reports) arr.push_back(to_json(r));
            out << arr.dump(2) << '\n';
        }
    } else if (opt.format == "csv") {
        out << "coefficient,n,estimate,variance,ci_lower,ci_upper,p_independence,p_general\n";
        for (const CoefficientReport& r : reports) {
            out << rc::coefficient_name(r.id) << ',' << n << ',' << r.estimate << ','
                << r.variance << ',' << r.ci.lower << ',' << r.ci.upper << ','
                << r.independence.p_value << ',' << r.general.p_value << '\n';
        }
    } else {
        char line[160];
        std::snprintf(line, sizeof line, "n = %zu, variance mode = %s, %s CIs\n\n", n,
                      ts ? "ts" : "iid", opt.fisher ? "Fisher" : "plain");
        out << line;
        std::snprintf(line, sizeof line, "%-11s %9s %10s %20s %12s %10s\n", "coefficient",
                      "estimate", "variance", "CI", "p (indep.)", "p");
        out << line;
        for (const CoefficientReport& r : reports) {
            char ci[40];
            std::snprintf(ci, sizeof ci, "[%.4f, %.4f]", r.ci.lower, r.ci.upper);
            std::snprintf(line, sizeof line, "%-11s %9.4f %10.5f %20s %12.4f %10.4f\n",
                          rc::coefficient_name(r.id), r.estimate, r.variance, ci,
                          r.independence.p_value, r.general.p_value);
            out << line;
        }
    }
    return 0;
}

int run_simulate(const SimulateOptions& opt) {
    rc::DgpSpec spec;
    spec.family = family_map.at(opt.dgp);
    spec.alpha = opt.alpha;
    spec.n = opt.n;
    spec.seed = opt.seed;
    spec.prerun = opt.prerun;
    spec.pi_x = opt.pi_x;
    spec.pi_y = opt.pi_y;
    const rc::PairedSample sample = rc::simulate(spec);
    std::ofstream file;
    std::ostream& out = open_output(file, opt.out);
    rc::write_paired_csv(out, sample);
    return 0;
}

int run_study(const StudyOptions& opt) {
    rc::StudySpec spec;
    spec.dgp.family = family_map.at(opt.dgp);
    spec.dgp.seed = opt.seed;
    spec.mc = opt.quick ? std::min(opt.mc, 200) : opt.mc;
    spec.level = opt.level;
    spec.fisher = opt.fisher;
    spec.threads = opt.threads;
    if (opt.bandwidth > 0) spec.bandwidth = opt.bandwidth;
    spec.task = opt.task == "coverage" ? rc::StudyTask::coverage : rc::StudyTask::size_power;

    const bool ts_family = rc::is_time_series_family(spec.dgp.family);
    const std::string mode = opt.mode.empty() ? (ts_family ? "ts" : "iid") : opt.mode;
    spec.variance_mode = mode == "ts" ? rc::VarianceMode::hac : rc::VarianceMode::iid;

    std::vector<std::string> names = opt.coefficients;
    if (names.empty()) names = {"tau"};
    for (const std::string& name : names)
        spec.coefficients.push_back(coefficient_map.at(name));

    // resolve the dependence parameter
    rc::CalibrationOptions calib;
    calib.cache_path = opt.cache;
    double alpha = opt.alpha.value_or(0.0);
    double target = opt.alpha.value_or(0.0);
    if (opt.target) {
        std::string tc = opt.target_coefficient;
        if (tc.empty()) tc = is_discrete_family(spec.dgp.family) ? "gamma" : "tau";
        alpha = rc::calibrate_alpha(spec.dgp, coefficient_map.at(tc), *opt.target, calib);
        target = *opt.target;
    }
    spec.dgp.alpha = alpha;

    std::vector<std::size_t> ns = opt.ns;
    if (ns.empty()) ns = opt.quick ? std::vector<std::size_t>{50, 200}
                                   : std::vector<std::size_t>{50, 200, 800};

    std::vector<std::pair<std::size_t, rc::StudyResult>> results;
    for (std::size_t n : ns) {
        spec.dgp.n = n;
        if (spec.task == rc::StudyTask::coverage) {
            spec.true_values = opt.true_values;
            if (spec.true_values.empty()) {
                for (rc::CoefficientId id : spec.coefficients)
                    spec.true_values.push_back(
                        rc::dgp_coefficient(spec.dgp, id, alpha, 1000000, 0xFEED));
            }
            if (spec.true_values.size() != spec.coefficients.size())
                throw rc::invalid_spec("study: need one --true-value per coefficient");
        }
        results.emplace_back(n, rc::run_study(spec));
    }

    std::ofstream file;
    std::ostream& out = open_output(file, opt.out);
    if (opt.format == "table") {
        // one row per n, one column per coefficient, rate with MC standard error
        out << "dgp=" << opt.dgp << " task=" << opt.task << " mode=" << mode
            << " mc=" << spec.mc << " level=" << spec.level << " alpha=" << alpha
            << (spec.task == rc::StudyTask::coverage && spec.fisher ? " fisher" : "")
            << "\n\n";
        char cell[64];
        std::snprintf(cell, sizeof cell, "%-8s", "n");
        out << cell;
        for (rc::CoefficientId id : spec.coefficients) {
            std::snprintf(cell, sizeof cell, " %16s", rc::coefficient_name(id));
            out << cell;
        }
        out << '\n';
        bool any_errors = false;
        for (const auto& [n, result] : results) {
            std::snprintf(cell, sizeof cell, "%-8zu", n);
            out << cell;
            for (const rc::StudyCellResult& c : result.cells) {
                std::snprintf(cell, sizeof cell, "  %.3f (%.3f)%s", c.rate, c.se,
                              c.errors ? "*" : " ");
                char padded[64];
                std::snprintf(padded, sizeof padded, " %16s", cell);
                out << padded;
                any_errors = any_errors || c.errors > 0;
            }
            out << '\n';
        }
        if (any_errors) {
            out << "\n* some replications failed on degenerate draws:\n";
            for (const auto& [n, result] : results)
                for (const rc::StudyCellResult& c : result.cells)
                    if (c.errors > 0)
                        out << "  n=" << n << ' ' << rc::coefficient_name(c.id) << ": "
                            << c.errors << " of " << spec.mc << '\n';
        }
    } else {
        out << rc::study_csv_header() << '\n';
        for (const auto& [n, result] : results) {
            spec.dgp.n = n;
            for (std::size_t c = 0; c < result.cells.size(); ++c) {
                const double shown_target = spec.task == rc::StudyTask::coverage
                                                ? spec.true_values[c]
                                                : target;
                out << rc::study_csv_row(spec, result.cells[c], shown_target) << '\n';
            }
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rank correlation inference: estimates, confidence intervals, "
                 "independence tests, simulation and Monte Carlo studies"};
    app.require_subcommand(1);

    const auto coefficient_check = CLI::IsMember([] {
        std::vector<std::string> names;
        for (const auto& [k, v] : coefficient_map) names.push_back(k);
        return names;
    }());
    const auto family_check = CLI::IsMember([] {
        std::vector<std::string> names;
        for (const auto& [k, v] : family_map) names.push_back(k);
        return names;
    }());
    const auto level_check = CLI::Range(1e-9, 1.0 - 1e-9);

    CorrelateOptions copt;
    CLI::App* correlate = app.add_subcommand(
        "correlate", "estimate coefficients with CIs and tests from a two-column CSV");
    correlate->add_option("input", copt.input, "input CSV path ('-' or empty: stdin)");
    correlate->add_option("--coefficient,-c", copt.coefficients, "coefficient (repeatable)")
        ->check(coefficient_check);
    correlate->add_option("--mode", copt.mode, "variance mode: iid or ts (rows = time order)")
        ->check(CLI::IsMember({"iid", "ts"}));
    correlate->add_option("--level", copt.level, "confidence level (default 0.90)")
        ->check(level_check);
    correlate->add_flag("--fisher,!--no-fisher", copt.fisher,
                        "Fisher-transformed CIs (default on)");
    correlate->add_option("--null", copt.null_value, "null value for the general test");
    correlate->add_option("--bandwidth", copt.bandwidth, "HAC bandwidth (default 2n^(1/3))")
        ->check(CLI::PositiveNumber);
    correlate->add_option("--format", copt.format, "output format")
        ->check(CLI::IsMember({"table", "json", "csv"}));
    correlate->add_option("--out", copt.out, "output file (default stdout)");

    SimulateOptions sopt;
    CLI::App* simulate = app.add_subcommand("simulate", "draw a sample from a DGP as CSV");
    simulate->add_option("--dgp", sopt.dgp, "DGP family")->required()->check(family_check);
    simulate->add_option("--alpha", sopt.alpha, "dependence parameter");
    simulate->add_option("--n", sopt.n, "sample length")->required()
        ->check(CLI::Range(std::size_t{2}, std::size_t{100000000}));
    simulate->add_option("--seed", sopt.seed, "RNG seed");
    simulate->add_option("--prerun", sopt.prerun, "burn-in steps (-1: family default)");
    simulate->add_option("--pi-x", sopt.pi_x, "bgeom margin parameter");
    simulate->add_option("--pi-y", sopt.pi_y, "bgeom margin parameter");
    simulate->add_option("--out", sopt.out, "output file (default stdout)");

    StudyOptions topt;
    CLI::App* study = app.add_subcommand("study", "Monte Carlo size/power or coverage study");
    study->add_option("--dgp", topt.dgp, "DGP family")->required()->check(family_check);
    study->add_option("--task", topt.task, "size or coverage")
        ->check(CLI::IsMember({"size", "size_power", "power", "coverage"}));
    study->add_option("--coefficient,-c", topt.coefficients, "coefficient (repeatable)")
        ->check(coefficient_check);
    study->add_option("--alpha", topt.alpha, "dependence parameter");
    study->add_option("--target", topt.target, "calibrate alpha to this coefficient value");
    study->add_option("--target-coefficient", topt.target_coefficient,
                      "coefficient the --target refers to")
        ->check(coefficient_check);
    study->add_option("--n", topt.ns, "sample length (repeatable; default 50 200 800)");
    study->add_option("--mc", topt.mc, "replications (default 1000)")->check(CLI::PositiveNumber);
    study->add_option("--level", topt.level, "confidence/test level")->check(level_check);
    study->add_flag("--fisher,!--no-fisher", topt.fisher, "Fisher CIs in coverage task");
    study->add_option("--mode", topt.mode, "variance mode override (iid or ts)")
        ->check(CLI::IsMember({"iid", "ts"}));
    study->add_option("--seed", topt.seed, "master seed");
    study->add_option("--bandwidth", topt.bandwidth, "HAC bandwidth override")
        ->check(CLI::PositiveNumber);
    study->add_option("--true-value", topt.true_values,
                      "true coefficient value for coverage (repeatable)");
    study->add_flag("--quick", topt.quick, "reduced profile: mc<=200, n in {50,200}");
    study->add_option("--threads", topt.threads, "worker threads (0 = hardware)");
    study->add_option("--cache", topt.cache, "calibration cache file");
    study->add_option("--format", topt.format, "output format")
        ->check(CLI::IsMember({"csv", "table"}));
    study->add_option("--out", topt.out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 3;
    }

    try {
        if (correlate->parsed()) return run_correlate(copt);
        if (simulate->parsed()) return run_simulate(sopt);
        if (study->parsed()) return run_study(topt);
    } catch (const rc::io_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const rc::error& e) {
        std::cerr << "error: " << e.what() << '\n';
        if (dynamic_cast<const rc::boundary_value*>(&e))
            std::cerr << "hint: |estimate| = 1, use --no-fisher for a plain interval\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
