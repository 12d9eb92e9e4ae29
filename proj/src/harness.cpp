#include "plis/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "plis/error.hpp"
#include "plis/methods.hpp"
#include "plis/rng.hpp"

namespace plis {

namespace {

const std::vector<std::string>& grid_keys() {
    static const std::vector<std::string> keys = {"generator", "m",      "mu",       "a00", "a11",   "c",   "innovation_sd",
                                                  "lambda",    "scenario", "pi_base", "pi",  "noise", "rho", "n_nulls"};
    return keys;
}

const std::vector<std::string>& plan_keys() {
    static const std::vector<std::string> keys = {"name",    "seed", "reps",           "alpha",
                                                  "threads", "out",  "record_runtime", "methods"};
    return keys;
}

std::size_t parse_count(const std::string& text, const std::string& key) {
    const double v = parse_double(text, key);
    if (!(v >= 0.0) || v != std::floor(v) || v > 1e15) {
        throw Error(ErrorKind::config_error, key + " must be a non-negative integer, got '" + text + "'");
    }
    return static_cast<std::size_t>(v);
}

void set_generator_value(GeneratorConfig& g, const std::string& key, const std::string& value) {
    if (key == "generator") {
        g.kind = value;
    } else if (key == "m") {
        g.m = parse_count(value, key);
    } else if (key == "mu") {
        g.mu = parse_double(value, key);
    } else if (key == "a00") {
        g.a00 = parse_double(value, key);
    } else if (key == "a11") {
        g.a11 = parse_double(value, key);
    } else if (key == "c") {
        g.c = parse_double(value, key);
    } else if (key == "innovation_sd") {
        g.innovation_sd = parse_double(value, key);
    } else if (key == "lambda") {
        g.lambda = parse_double(value, key);
    } else if (key == "scenario") {
        g.scenario = static_cast<int>(parse_count(value, key));
    } else if (key == "pi_base") {
        g.pi_base = parse_double(value, key);
    } else if (key == "pi") {
        g.pi = parse_double(value, key);
    } else if (key == "noise") {
        g.noise.kind = parse_noise_kind(value);
    } else if (key == "rho") {
        g.noise.rho = parse_double(value, key);
    } else if (key == "n_nulls") {
        g.n_nulls = parse_count(value, key);
    }
}

void put_generator_value(nlohmann::ordered_json& j, const GeneratorConfig& g, const std::string& key) {
    if (key == "m") {
        j[key] = g.m;
    } else if (key == "mu") {
        j[key] = g.mu;
    } else if (key == "a00") {
        j[key] = g.a00;
    } else if (key == "a11") {
        j[key] = g.a11;
    } else if (key == "c") {
        j[key] = g.c;
    } else if (key == "innovation_sd") {
        j[key] = g.innovation_sd;
    } else if (key == "lambda") {
        j[key] = g.lambda;
    } else if (key == "scenario") {
        j[key] = g.scenario;
    } else if (key == "pi_base") {
        if (g.pi_base) {
            j[key] = *g.pi_base;
        }
    } else if (key == "pi") {
        j[key] = g.pi;
    } else if (key == "noise") {
        j[key] = to_string(g.noise.kind);
    } else if (key == "rho") {
        j[key] = g.noise.rho;
    } else if (key == "n_nulls") {
        j[key] = g.n_nulls;
    }
}

GridCell build_cell(const GeneratorConfig& g, const std::vector<std::string>& keys) {
    g.validate();
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& key : keys) {
        put_generator_value(j, g, key);
    }
    GridCell cell{g, j.dump(), 0};
    cell.seed_key = hash_name((g.kind + cell.params_json).c_str());
    return cell;
}

std::vector<std::string> relevant_keys(const GeneratorConfig& g) {
    std::vector<std::string> keys = {"m", "mu"};
    if (g.kind == "hmm") {
        keys.insert(keys.end(), {"a00", "a11"});
    } else if (g.kind == "hetero_exp" || g.kind == "hetero_periodic") {
        keys.push_back("a00");
    } else if (g.kind == "two_layer") {
        keys.insert(keys.end(), {"c", "innovation_sd"});
    } else if (g.kind == "renewal") {
        keys.push_back("lambda");
    } else if (g.kind == "covariate") {
        keys.insert(keys.end(), {"scenario", "pi_base"});
    } else if (g.kind == "iid_two_group") {
        keys.push_back("pi");
    }
    if (g.noise.kind != NoiseKind::iid) {
        keys.insert(keys.end(), {"noise", "rho"});
    }
    if (g.n_nulls > 0) {
        keys.push_back("n_nulls");
    }
    return keys;
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) {
        s += x;
    }
    return s / static_cast<double>(v.size());
}

double se_of(const std::vector<double>& v, double mean) {
    if (v.size() < 2) {
        return 0.0;
    }
    double ss = 0.0;
    for (double x : v) {
        ss += (x - mean) * (x - mean);
    }
    return std::sqrt(ss / static_cast<double>(v.size() - 1)) / std::sqrt(static_cast<double>(v.size()));
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') {
            out += '"';
        }
        out += ch;
    }
    return out + "\"";
}

std::vector<std::string> parse_csv_line(const std::string& line, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                current += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                current += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(current);
            current.clear();
        } else {
            current += ch;
        }
    }
    if (quoted) {
        throw Error(ErrorKind::parse_error, "line " + std::to_string(line_no) + ": unterminated quote");
    }
    fields.push_back(current);
    return fields;
}

} // namespace

GridCell make_cell(const GeneratorConfig& generator) {
    return build_cell(generator, relevant_keys(generator));
}

std::uint64_t replication_seed(std::uint64_t plan_seed, const GridCell& cell, std::size_t rep) {
    return derive_seed(plan_seed, cell.seed_key, rep);
}

std::uint64_t calibration_seed(std::uint64_t data_seed) {
    return derive_seed(data_seed, hash_name("calibration"));
}

ExperimentPlan ExperimentPlan::from_config(const KeyValueConfig& config) {
    for (const auto& key : config.keys()) {
        const bool known = std::find(plan_keys().begin(), plan_keys().end(), key) != plan_keys().end() ||
                           std::find(grid_keys().begin(), grid_keys().end(), key) != grid_keys().end();
        if (!known) {
            throw Error(ErrorKind::config_error, "unknown plan key '" + key + "'");
        }
    }
    if (!config.has("seed")) {
        throw Error(ErrorKind::config_error, "plan needs an explicit seed");
    }
    ExperimentPlan plan;
    plan.name = config.get_string("name", plan.name);
    plan.seed = static_cast<std::uint64_t>(parse_count(config.get("seed"), "seed"));
    plan.reps = parse_count(config.get_string("reps", "200"), "reps");
    if (plan.reps == 0) {
        throw Error(ErrorKind::config_error, "reps must be at least 1");
    }
    plan.alpha = config.get_double("alpha", plan.alpha);
    if (!(plan.alpha > 0.0 && plan.alpha < 1.0)) {
        throw Error(ErrorKind::config_error, "alpha must lie in (0, 1)");
    }
    plan.threads = parse_count(config.get_string("threads", "0"), "threads");
    plan.out = config.get_string("out", plan.name);
    plan.record_runtime = config.get_bool("record_runtime", false);
    if (!config.has("methods")) {
        throw Error(ErrorKind::config_error, "plan lists no methods");
    }
    bool needs_nulls = false;
    for (const auto& text : split_top_level(config.get("methods"), ',')) {
        const auto method = resolve_method(text);
        needs_nulls = needs_nulls || method.needs_nulls();
        plan.methods.push_back(method.label());
    }
    if (plan.methods.empty()) {
        throw Error(ErrorKind::config_error, "plan lists no methods");
    }

    for (const auto& key : grid_keys()) {
        if (config.has(key)) {
            auto values = split_top_level(config.get(key), ',');
            if (values.empty()) {
                throw Error(ErrorKind::config_error, "plan key '" + key + "' has no values");
            }
            plan.grid.emplace_back(key, std::move(values));
        }
    }
    std::vector<std::string> json_keys;
    for (const auto& [key, values] : plan.grid) {
        if (key != "generator") {
            json_keys.push_back(key);
        }
    }
    if (needs_nulls && !config.has("n_nulls")) {
        json_keys.push_back("n_nulls");
    }

    std::vector<std::size_t> index(plan.grid.size(), 0);
    while (true) {
        GeneratorConfig g;
        for (std::size_t k = 0; k < plan.grid.size(); ++k) {
            set_generator_value(g, plan.grid[k].first, plan.grid[k].second[index[k]]);
        }
        if (needs_nulls && !config.has("n_nulls")) {
            g.n_nulls = 2 * g.m;
        }
        plan.cells.push_back(build_cell(g, json_keys));
        std::size_t k = plan.grid.size();
        while (k > 0) {
            --k;
            if (++index[k] < plan.grid[k].second.size()) {
                break;
            }
            index[k] = 0;
            if (k == 0) {
                return plan;
            }
        }
        if (plan.grid.empty()) {
            return plan;
        }
    }
}

ExperimentPlan ExperimentPlan::load(const std::string& path) {
    return from_config(KeyValueConfig::load(path));
}

CellSummary summarize(std::span<const ReplicationMetrics> rows) {
    if (rows.empty()) {
        throw Error(ErrorKind::invalid_argument, "cannot summarize zero replications");
    }
    CellSummary s;
    s.cell_id = rows.front().cell_id;
    s.method = rows.front().method;
    std::vector<double> fdp, tdp;
    for (const auto& r : rows) {
        if (r.ok) {
            fdp.push_back(r.fdp);
            tdp.push_back(r.tdp);
        } else {
            ++s.n_failed;
        }
    }
    s.n_rep = fdp.size();
    s.se_defined = s.n_rep >= 2;
    if (s.n_rep == 0) {
        s.fdr = s.ap = std::nan("");
        return s;
    }
    s.fdr = mean_of(fdp);
    s.ap = mean_of(tdp);
    s.se_fdr = se_of(fdp, s.fdr);
    s.se_ap = se_of(tdp, s.ap);
    return s;
}

PlanResult run_plan(const ExperimentPlan& plan) {
    std::vector<Method> methods;
    for (const auto& text : plan.methods) {
        methods.push_back(resolve_method(text));
    }
    const std::size_t n_methods = methods.size();
    const std::size_t n_tasks = plan.cells.size() * plan.reps;
    std::vector<ReplicationMetrics> slots(n_tasks * n_methods);

    auto run_task = [&](std::size_t task) {
        const std::size_t cell_id = task / plan.reps;
        const std::size_t rep = task % plan.reps;
        const auto& cell = plan.cells[cell_id];
        const auto data_seed = replication_seed(plan.seed, cell, rep);
        LabeledDataset data;
        std::string data_error;
        try {
            data = generate(cell.generator, data_seed);
        } catch (const std::exception& e) {
            data_error = e.what();
        }
        for (std::size_t k = 0; k < n_methods; ++k) {
            auto& row = slots[task * n_methods + k];
            row.cell_id = cell_id;
            row.method = methods[k].label();
            row.generator = cell.generator.kind;
            row.params_json = cell.params_json;
            row.rep = rep;
            if (!data_error.empty()) {
                row.ok = false;
                row.n_reject = -1;
                row.error = data_error;
                continue;
            }
            const auto start = std::chrono::steady_clock::now();
            try {
                MethodInput input{data.x, data.nulls, NullDistribution::normal(), plan.alpha, calibration_seed(data_seed)};
                const auto out = methods[k].run(input);
                const auto metrics = compute_fdp_tdp(out.decisions, data.truth);
                row.fdp = metrics.fdp;
                row.tdp = metrics.tdp;
                row.n_reject = static_cast<long long>(count_ones(out.decisions));
            } catch (const std::exception& e) {
                row.ok = false;
                row.n_reject = -1;
                row.error = e.what();
            }
            if (plan.record_runtime) {
                row.runtime_ms =
                    std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
            }
        }
    };

    std::size_t threads = plan.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : plan.threads;
    threads = std::min(threads, std::max<std::size_t>(n_tasks, 1));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t task; (task = next.fetch_add(1)) < n_tasks;) {
            run_task(task);
        }
    };
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 1; t < threads; ++t) {
            pool.emplace_back(worker);
        }
        worker();
    }

    PlanResult result;
    result.rows.reserve(slots.size());
    for (std::size_t cell_id = 0; cell_id < plan.cells.size(); ++cell_id) {
        for (std::size_t k = 0; k < n_methods; ++k) {
            const std::size_t first = result.rows.size();
            for (std::size_t rep = 0; rep < plan.reps; ++rep) {
                result.rows.push_back(std::move(slots[(cell_id * plan.reps + rep) * n_methods + k]));
            }
            auto summary = summarize(std::span(result.rows).subspan(first, plan.reps));
            result.any_cell_failed = result.any_cell_failed || summary.n_rep == 0;
            result.summaries.push_back(std::move(summary));
        }
    }
    return result;
}

void write_raw_csv(std::ostream& out, std::span<const ReplicationMetrics> rows) {
    out << "cell_id,method,generator,params_json,rep,fdp,tdp,n_reject,runtime_ms\n";
    for (const auto& r : rows) {
        out << r.cell_id << ',' << csv_field(r.method) << ',' << csv_field(r.generator) << ','
            << csv_field(r.params_json) << ',' << r.rep << ',' << (r.ok ? format_double(r.fdp) : "NA") << ','
            << (r.ok ? format_double(r.tdp) : "NA") << ',' << r.n_reject << ',' << format_double(r.runtime_ms) << '\n';
    }
}

void write_summary_csv(std::ostream& out, std::span<const CellSummary> summaries) {
    out << "cell_id,method,fdr,se_fdr,ap,se_ap,n_rep\n";
    for (const auto& s : summaries) {
        auto num = [&](double v) { return s.n_rep == 0 ? std::string("NA") : format_double(v); };
        out << s.cell_id << ',' << csv_field(s.method) << ',' << num(s.fdr) << ',' << num(s.se_fdr) << ','
            << num(s.ap) << ',' << num(s.se_ap) << ',' << s.n_rep << '\n';
    }
}

std::vector<ReplicationMetrics> read_raw_csv(std::istream& in) {
    std::vector<ReplicationMetrics> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 || line.empty()) {
            continue;
        }
        const auto f = parse_csv_line(line, line_no);
        if (f.size() != 9) {
            throw Error(ErrorKind::parse_error, "line " + std::to_string(line_no) + ": expected 9 fields, got " +
                                                    std::to_string(f.size()));
        }
        const std::string where = "line " + std::to_string(line_no);
        ReplicationMetrics r;
        r.cell_id = parse_count(f[0], where + " cell_id");
        r.method = f[1];
        r.generator = f[2];
        r.params_json = f[3];
        r.rep = parse_count(f[4], where + " rep");
        r.ok = f[5] != "NA";
        if (r.ok) {
            r.fdp = parse_double(f[5], where + " fdp");
            r.tdp = parse_double(f[6], where + " tdp");
        }
        r.n_reject = static_cast<long long>(parse_double(f[7], where + " n_reject"));
        r.runtime_ms = parse_double(f[8], where + " runtime_ms");
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_outputs(const ExperimentPlan& plan, const PlanResult& result) {
    auto open = [](const std::string& path) {
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            throw Error(ErrorKind::io_error, "cannot write " + path);
        }
        return out;
    };
    auto raw = open(plan.out + "_raw.csv");
    write_raw_csv(raw, result.rows);
    auto summary = open(plan.out + "_summary.csv");
    write_summary_csv(summary, result.summaries);
}

std::string describe_plan(const ExperimentPlan& plan) {
    std::ostringstream out;
    out << "name = " << plan.name << '\n'
        << "seed = " << plan.seed << '\n'
        << "reps = " << plan.reps << '\n'
        << "alpha = " << format_double(plan.alpha) << '\n'
        << "threads = " << plan.threads << '\n'
        << "out = " << plan.out << '\n'
        << "record_runtime = " << (plan.record_runtime ? "true" : "false") << '\n';
    std::string methods;
    for (const auto& m : plan.methods) {
        methods += (methods.empty() ? "" : ", ") + m;
    }
    out << "methods = " << methods << '\n';
    for (const auto& [key, values] : plan.grid) {
        std::string joined;
        for (const auto& v : values) {
            joined += (joined.empty() ? "" : ", ") + v;
        }
        out << key << " = " << joined << '\n';
    }
    out << "# " << plan.cells.size() << " cells\n";
    return out.str();
}

} // namespace plis
