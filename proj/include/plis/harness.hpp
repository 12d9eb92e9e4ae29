#ifndef PLIS_HARNESS_HPP
#define PLIS_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "plis/config.hpp"
#include "plis/simgen.hpp"

/**
 * @file harness.hpp
 *
 * @brief Replicated simulation runs over a generator grid and a list of methods.
 *
 * A plan is a key-value file. `seed` is mandatory. Generator parameters (m, mu, a00, a11, c,
 * innovation_sd, lambda, scenario, pi_base, pi, noise, rho, n_nulls) and `generator` accept
 * comma-separated lists; the grid is their Cartesian product. Example:
 *
 *     name = hmm_grid
 *     seed = 2024
 *     reps = 200
 *     alpha = 0.05
 *     generator = hmm
 *     a11 = 0.1, 0.5, 0.9
 *     mu = 2.6
 *     methods = plis_hm, plis_tg, adadetect, bh
 *     out = hmm_grid
 *
 * Replication r of a cell draws its data from a seed derived from (seed, cell parameters, r),
 * so every method sees the same data and the same calibration draws.
 */

namespace plis {

struct GridCell {
    GeneratorConfig generator;
    /// The plan's generator parameters for this cell as a JSON object.
    std::string params_json;
    std::uint64_t seed_key = 0;
};

struct ExperimentPlan {
    std::string name = "plan";
    std::uint64_t seed = 0;
    std::size_t reps = 200;
    double alpha = 0.05;
    /// Worker threads; 0 uses the hardware concurrency.
    std::size_t threads = 0;
    /// Generator keys with their listed values, in canonical key order.
    std::vector<std::pair<std::string, std::vector<std::string>>> grid;
    std::vector<GridCell> cells;
    std::vector<std::string> methods;
    /// Output prefix: `<out>_raw.csv` and `<out>_summary.csv`.
    std::string out = "plan";
    /// Wall-clock timings vary between runs; unless set, the runtime column is written as 0.
    bool record_runtime = false;

    static ExperimentPlan from_config(const KeyValueConfig& config);
    static ExperimentPlan load(const std::string& path);
};

/// Builds one grid cell from explicit generator settings, as plans do.
GridCell make_cell(const GeneratorConfig& generator);

/// Seed of the data for replication `rep` of a cell.
std::uint64_t replication_seed(std::uint64_t plan_seed, const GridCell& cell, std::size_t rep);

/// Seed of the calibration draws made by the methods on that data.
std::uint64_t calibration_seed(std::uint64_t data_seed);

struct ReplicationMetrics {
    std::size_t cell_id = 0;
    std::string method;
    std::string generator;
    std::string params_json;
    std::size_t rep = 0;
    bool ok = true;
    double fdp = 0.0;
    double tdp = 0.0;
    /// -1 for a failed replication.
    long long n_reject = 0;
    double runtime_ms = 0.0;
    std::string error;
};

struct CellSummary {
    std::size_t cell_id = 0;
    std::string method;
    double fdr = 0.0;
    double se_fdr = 0.0;
    double ap = 0.0;
    double se_ap = 0.0;
    /// Successful replications.
    std::size_t n_rep = 0;
    std::size_t n_failed = 0;
    /// False when fewer than two replications succeeded; the standard errors are then 0.
    bool se_defined = true;
};

/// Means and standard errors (sample sd / sqrt(n)) over successful rows. Throws on empty input.
CellSummary summarize(std::span<const ReplicationMetrics> rows);

struct PlanResult {
    /// Ordered by cell, method (plan order) and replication.
    std::vector<ReplicationMetrics> rows;
    std::vector<CellSummary> summaries;
    /// Some (cell, method) had no successful replication.
    bool any_cell_failed = false;
};

PlanResult run_plan(const ExperimentPlan& plan);

void write_raw_csv(std::ostream& out, std::span<const ReplicationMetrics> rows);
void write_summary_csv(std::ostream& out, std::span<const CellSummary> summaries);
std::vector<ReplicationMetrics> read_raw_csv(std::istream& in);

/// Writes `<plan.out>_raw.csv` and `<plan.out>_summary.csv`.
void write_outputs(const ExperimentPlan& plan, const PlanResult& result);

/// The plan with every default filled in, in key-value form.
std::string describe_plan(const ExperimentPlan& plan);

} // namespace plis

#endif // PLIS_HARNESS_HPP
