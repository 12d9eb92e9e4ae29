#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>

#include "plis/acceptance.hpp"
#include "plis/config.hpp"
#include "plis/data_io.hpp"
#include "plis/error.hpp"
#include "plis/harness.hpp"
#include "plis/multiple_testing.hpp"
#include "plis/procedures.hpp"
#include "plis/simgen.hpp"

namespace {

using namespace plis;

constexpr int exit_ok = 0;
constexpr int exit_failure = 1;
constexpr int exit_config = 2;

const char* const test_keys[] = {"input",       "alpha",         "seed",   "method", "model",       "combiner",
                                 "null",        "nulls",         "column", "label_column", "window_start",
                                 "window_length", "runs",        "alpha_k", "scores", "out",         "save_params"};

KeyValueConfig test_defaults() {
    return KeyValueConfig::parse("input = \n"
                                 "alpha = 0.05\n"
                                 "seed = 0\n"
                                 "method = plis\n"
                                 "model = hmm\n"
                                 "combiner = max_abs\n"
                                 "null = normal(0, 1)\n"
                                 "nulls = \n"
                                 "column = 1\n"
                                 "label_column = \n"
                                 "window_start = 1\n"
                                 "window_length = 1500\n"
                                 "runs = 30\n"
                                 "alpha_k = 0.5\n"
                                 "scores = \n"
                                 "out = \n"
                                 "save_params = \n");
}

struct TestFlags {
    std::string config_path;
    std::map<std::string, std::string> given;
    bool print_config = false;
};

/// Defaults, then the config file, then flags. `explicit_keys` collects what the user set.
KeyValueConfig resolve_test_config(const TestFlags& flags, std::set<std::string>& explicit_keys) {
    auto config = test_defaults();
    if (!flags.config_path.empty()) {
        const auto file = KeyValueConfig::load(flags.config_path);
        for (const auto& key : file.keys()) {
            if (!config.has(key)) {
                throw Error(ErrorKind::config_error, flags.config_path + ": unknown key '" + key + "'");
            }
            config.set(key, file.get(key));
            explicit_keys.insert(key);
        }
    }
    for (const auto& [key, value] : flags.given) {
        config.set(key, value);
        explicit_keys.insert(key);
    }
    return config;
}

std::vector<double> nan_vector(std::size_t n) {
    return std::vector<double>(n, std::numeric_limits<double>::quiet_NaN());
}

std::size_t positive_count(const KeyValueConfig& config, const std::string& key) {
    const auto v = config.get_int(key);
    if (v < 1) {
        throw Error(ErrorKind::config_error, key + " must be at least 1");
    }
    return static_cast<std::size_t>(v);
}

int cmd_test(const TestFlags& flags) {
    std::set<std::string> explicit_keys;
    const auto config = resolve_test_config(flags, explicit_keys);
    if (flags.print_config) {
        std::cout << config.to_string();
        return exit_ok;
    }
    const double alpha = config.get_double("alpha");
    const auto seed = static_cast<std::uint64_t>(config.get_int("seed"));
    const auto method = config.get("method");
    if (method != "plis" && method != "derand" && method != "cbh" && method != "sym") {
        throw Error(ErrorKind::config_error, "unknown method '" + method + "' (plis, derand, cbh, sym)");
    }
    WorkingModelSpec model;
    const auto model_name = config.get("model");
    if (model_name == "hmm") {
        model = WorkingModelSpec::hmm();
    } else if (model_name == "twogroup" || model_name == "two_group") {
        model = WorkingModelSpec::two_group();
    } else {
        throw Error(ErrorKind::config_error, "unknown model '" + model_name + "' (hmm, twogroup)");
    }
    model.combiner = parse_combiner(config.get("combiner"));

    std::vector<double> x;
    ProcedureResult result;
    const auto scores_path = config.get("scores");
    if (!scores_path.empty()) {
        const auto table = read_table_file(scores_path);
        if (table.columns.size() != 2) {
            throw Error(ErrorKind::parse_error, scores_path + ": expected two columns s_x, s_y");
        }
        if (method == "derand") {
            throw Error(ErrorKind::config_error, "derand needs data, not scores");
        }
        result = decide(ScoredData{ScorePairVector(table.columns[0], table.columns[1]), {}}, alpha);
    } else {
        const auto input = config.get("input");
        if (input.empty()) {
            throw Error(ErrorKind::config_error, "no input file");
        }
        const auto table = read_table_file(input);
        std::vector<double> nulls;
        const auto label_column = config.get("label_column");
        const auto nulls_path = config.get("nulls");
        if (!label_column.empty() && !nulls_path.empty()) {
            throw Error(ErrorKind::config_error, "give either nulls or label_column, not both");
        }
        if (!label_column.empty()) {
            const auto& values = table.column(config.get("column"));
            const auto& labels = table.column(label_column);
            const auto start = positive_count(config, "window_start") - 1;
            const auto length = positive_count(config, "window_length");
            if (start + length > table.rows()) {
                throw Error(ErrorKind::config_error, "window rows " + std::to_string(start + 1) + ".." +
                                                         std::to_string(start + length) + " exceed the " +
                                                         std::to_string(table.rows()) + " input rows");
            }
            for (std::size_t i = 0; i < table.rows(); ++i) {
                if (i >= start && i < start + length) {
                    x.push_back(values[i]);
                } else if (labels[i] == 0.0) {
                    nulls.push_back(values[i]);
                }
            }
        } else {
            x = table.column(config.get("column"));
            if (!nulls_path.empty()) {
                const auto null_table = read_table_file(nulls_path);
                nulls = null_table.columns.front();
            }
        }
        const bool semi_supervised = !label_column.empty() || !nulls_path.empty();
        if (semi_supervised) {
            if (explicit_keys.count("null")) {
                throw Error(ErrorKind::config_error, "a null distribution and a null sample are exclusive");
            }
            if (method == "derand") {
                throw Error(ErrorKind::config_error, "derand is supervised only");
            }
            result = semi_supervised_plis(x, nulls, model, alpha, seed);
        } else {
            const auto f0 = NullDistribution::parse(config.get("null"));
            if (method == "derand") {
                const auto runs = positive_count(config, "runs");
                const std::vector<double> alphas(runs, config.get_double("alpha_k") * alpha);
                result = derandomized_plis(x, f0, model, runs, alphas, alpha, seed);
            } else {
                result = run_plis(x, f0, model, alpha, seed);
            }
        }
    }

    const auto m = result.decisions.size();
    if (method == "cbh" || method == "sym") {
        result.decisions = method == "cbh" ? plis_cbh(result.scores, alpha) : plis_sym(result.scores, alpha);
        result.q_values = nan_vector(m);
        result.e_values = nan_vector(m);
        result.tau = std::numeric_limits<double>::quiet_NaN();
    }
    if (result.q_values.size() != m) {
        result.q_values = nan_vector(m);
    }
    if (method == "derand") {
        result.tau = std::numeric_limits<double>::quiet_NaN();
    }

    std::cout << "rejections: " << result.n_rejected() << " of " << m << '\n';
    std::cout << "tau: " << (std::isnan(result.tau) ? std::string("NA") : format_double(result.tau)) << '\n';
    if (const auto& em = result.diagnostics.em) {
        std::cout << "em: " << em->iterations << " iterations, " << (em->converged ? "converged" : "not converged")
                  << (em->degenerate ? ", degenerate (start point kept)" : "") << '\n';
    }
    if (result.diagnostics.n_sentinel > 0) {
        std::cout << "density ratio sentinel used for " << result.diagnostics.n_sentinel << " scores\n";
    }
    if (result.diagnostics.n_clamped > 0) {
        std::cout << "z-transform clamped " << result.diagnostics.n_clamped << " values\n";
    }

    const auto out_path = config.get("out");
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) {
            throw Error(ErrorKind::io_error, "cannot write '" + out_path + "'");
        }
        write_test_output(out, x, result);
    }
    const auto params_path = config.get("save_params");
    if (!params_path.empty()) {
        if (!result.diagnostics.hmm_params) {
            throw Error(ErrorKind::config_error, "save_params needs the hmm model");
        }
        std::ofstream out(params_path);
        out << result.diagnostics.hmm_params->to_key_value();
    }
    return exit_ok;
}

std::string locate_plan(const std::string& name) {
    if (std::filesystem::exists(name)) {
        return name;
    }
    const auto bundled = std::filesystem::path(PLIS_PLANS_DIR) / (name + ".plan");
    if (std::filesystem::exists(bundled)) {
        return bundled.string();
    }
    throw Error(ErrorKind::config_error, "no plan file or bundled plan named '" + name + "'");
}

struct SimulateFlags {
    std::string plan;
    std::optional<std::size_t> threads;
    std::optional<std::size_t> reps;
    std::string out;
    bool print_config = false;
};

int cmd_simulate(const SimulateFlags& flags) {
    auto plan = ExperimentPlan::load(locate_plan(flags.plan));
    if (flags.threads) {
        plan.threads = *flags.threads;
    }
    if (flags.reps) {
        plan.reps = *flags.reps;
    }
    if (!flags.out.empty()) {
        plan.out = flags.out;
    }
    if (flags.print_config) {
        std::cout << describe_plan(plan);
        return exit_ok;
    }
    const auto result = run_plan(plan);
    write_outputs(plan, result);
    std::cout << "cell,method,fdr,se_fdr,ap,se_ap,n_rep,n_failed\n";
    for (const auto& s : result.summaries) {
        std::cout << s.cell_id << ',' << s.method << ',' << format_double(s.fdr) << ',' << format_double(s.se_fdr)
                  << ',' << format_double(s.ap) << ',' << format_double(s.se_ap) << ',' << s.n_rep << ','
                  << s.n_failed << '\n';
    }
    std::cout << "wrote " << plan.out << "_raw.csv and " << plan.out << "_summary.csv\n";
    if (result.any_cell_failed) {
        std::cerr << "some cells failed in every replication\n";
        return exit_failure;
    }
    return exit_ok;
}

int cmd_accept(const AcceptanceOptions& options) {
    const auto results = run_acceptance(options, [](const CriterionResult& r) {
        std::cout << format_result_line(r) << std::endl;
    });
    std::size_t passed = 0;
    for (const auto& r : results) {
        passed += r.passed;
    }
    std::cout << passed << " of " << results.size() << " criteria passed\n";
    return passed == results.size() ? exit_ok : exit_failure;
}

struct GenerateFlags {
    GeneratorConfig generator;
    std::string noise = "iid";
    double rho = 0.0;
    std::uint64_t seed = 0;
    std::string out;
    std::string nulls_out;
};

int cmd_generate(GenerateFlags flags) {
    flags.generator.noise = {parse_noise_kind(flags.noise), flags.rho};
    flags.generator.validate();
    const auto data = generate(flags.generator, flags.seed);
    if (flags.out.empty()) {
        write_dataset(std::cout, data);
    } else {
        std::ofstream out(flags.out);
        if (!out) {
            throw Error(ErrorKind::io_error, "cannot write '" + flags.out + "'");
        }
        write_dataset(out, data);
    }
    if (!flags.nulls_out.empty()) {
        std::ofstream out(flags.nulls_out);
        out << "u\n";
        for (double u : data.nulls) {
            out << format_double(u) << '\n';
        }
    }
    return exit_ok;
}

int exit_code_for(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::config_error:
    case ErrorKind::parse_error:
    case ErrorKind::io_error:
    case ErrorKind::invalid_argument:
    case ErrorKind::out_of_range:
    case ErrorKind::length_mismatch:
    case ErrorKind::non_finite_input:
    case ErrorKind::insufficient_nulls:
        return exit_config;
    }
    return exit_failure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Conformal FDR control for structured multiple testing"};
    app.require_subcommand(1);

    TestFlags test_flags;
    auto* test = app.add_subcommand("test", "Run a procedure on a data file");
    std::map<std::string, std::string> test_values;
    test->add_option("input", test_values["input"], "Delimited data file, one observation per row");
    test->add_option("--config", test_flags.config_path, "Key-value file with run settings");
    test->add_option("--alpha", test_values["alpha"], "Target FDR level");
    test->add_option("--seed", test_values["seed"], "Seed of the calibration draws");
    test->add_option("--method", test_values["method"], "plis, derand, cbh or sym");
    test->add_option("--model", test_values["model"], "Working model: hmm or twogroup");
    test->add_option("--combiner", test_values["combiner"], "Baseline combiner: max_abs or additive");
    test->add_option("--null", test_values["null"], "Known null, e.g. normal(0, 1), uniform(0, 1), chisq(3)");
    test->add_option("--nulls", test_values["nulls"], "File of null samples (semi-supervised)");
    test->add_option("--column", test_values["column"], "Data column by name or 1-based position");
    test->add_option("--label-column", test_values["label_column"],
                     "Label column; rows labelled 0 outside the window form the null pool");
    test->add_option("--window-start", test_values["window_start"], "First test row (1-based) with --label-column");
    test->add_option("--window-length", test_values["window_length"], "Number of test rows with --label-column");
    test->add_option("--runs", test_values["runs"], "Number of runs for derand");
    test->add_option("--alpha-k", test_values["alpha_k"], "Per-run level of derand as a multiple of alpha");
    test->add_option("--scores", test_values["scores"], "Debug: file of score pairs s_x, s_y used as is");
    test->add_option("--out", test_values["out"], "Per-hypothesis result CSV");
    test->add_option("--save-params", test_values["save_params"], "Write the fitted HMM parameters here");
    test->add_flag("--print-config", test_flags.print_config, "Print the resolved settings and exit");

    SimulateFlags simulate_flags;
    auto* simulate = app.add_subcommand("simulate", "Run a simulation plan");
    simulate->add_option("plan", simulate_flags.plan, "Plan file or bundled plan name (hmm_grid, hetero_grid, combiner_grid)")->required();
    simulate->add_option("--threads", simulate_flags.threads, "Worker threads (0 = all cores)");
    simulate->add_option("--reps", simulate_flags.reps, "Override the number of replications");
    simulate->add_option("--out", simulate_flags.out, "Output prefix");
    simulate->add_flag("--print-config", simulate_flags.print_config, "Print the resolved plan and exit");

    AcceptanceOptions accept_options;
    auto* accept = app.add_subcommand("accept", "Run the acceptance suites");
    accept->add_option("--criteria", accept_options.criteria, "Criteria to run (default all)")
        ->delimiter(',')
        ->check(CLI::Range(1, acceptance_criteria_count));
    accept->add_option("--reps", accept_options.reps, "Replications per cell");
    accept->add_option("--threads", accept_options.threads, "Worker threads (0 = all cores)");
    accept->add_option("--seed", accept_options.seed, "Master seed");
    accept->add_option("--out", accept_options.out_prefix, "Prefix for the CSVs of the simulation criteria");

    GenerateFlags generate_flags;
    auto* gen = app.add_subcommand("generate", "Write a simulated dataset (index, x, theta)");
    gen->add_option("--generator", generate_flags.generator.kind,
                    "hmm, hetero_exp, two_layer, renewal, covariate, iid_two_group");
    gen->add_option("--m", generate_flags.generator.m);
    gen->add_option("--mu", generate_flags.generator.mu);
    gen->add_option("--a00", generate_flags.generator.a00);
    gen->add_option("--a11", generate_flags.generator.a11);
    gen->add_option("--c", generate_flags.generator.c);
    gen->add_option("--lambda", generate_flags.generator.lambda);
    gen->add_option("--scenario", generate_flags.generator.scenario);
    gen->add_option("--pi", generate_flags.generator.pi);
    gen->add_option("--noise", generate_flags.noise, "iid, equicorrelated, ar1");
    gen->add_option("--rho", generate_flags.rho);
    gen->add_option("--n-nulls", generate_flags.generator.n_nulls, "Null pool size");
    gen->add_option("--seed", generate_flags.seed);
    gen->add_option("--out", generate_flags.out, "Data file (default stdout)");
    gen->add_option("--nulls-out", generate_flags.nulls_out, "Null pool file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    try {
        if (test->parsed()) {
            for (const std::string key : test_keys) {
                auto flag = key == "input" ? key : "--" + key;
                std::replace(flag.begin(), flag.end(), '_', '-');
                if (test->count(flag) > 0) {
                    test_flags.given[key] = test_values[key];
                }
            }
            return cmd_test(test_flags);
        }
        if (simulate->parsed()) {
            return cmd_simulate(simulate_flags);
        }
        if (accept->parsed()) {
            return cmd_accept(accept_options);
        }
        return cmd_generate(generate_flags);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_failure;
    }
}
