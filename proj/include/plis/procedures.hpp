#ifndef PLIS_PROCEDURES_HPP
#define PLIS_PROCEDURES_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "plis/baseline.hpp"
#include "plis/core.hpp"
#include "plis/distributions.hpp"
#include "plis/hmm.hpp"
#include "plis/mirror.hpp"
#include "plis/scores.hpp"

/**
 * @file procedures.hpp
 *
 * @brief End-to-end PLIS procedures: supervised, semi-supervised and derandomized.
 *
 * Observations are first mapped to z-values under F0, so both working models operate on a
 * standard normal null. Calibration draws for run k come from `Rng(seed, k)`.
 */

namespace plis {

enum class ModelKind { hmm, two_group };

const char* to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& name);

struct WorkingModelSpec {
    ModelKind kind = ModelKind::hmm;
    Combiner combiner = Combiner::max_abs;
    /// HMM fitting options. In the supervised setting the null emission is frozen at N(0, 1)
    /// unless `estimate_null` is set.
    EmConfig em;
    bool estimate_null = false;
    /// Two-group bandwidth; Silverman's rule when empty.
    std::optional<double> bandwidth;

    static WorkingModelSpec hmm(Combiner combiner = Combiner::max_abs);
    static WorkingModelSpec two_group(Combiner combiner = Combiner::max_abs);
};

struct ProcedureDiagnostics {
    std::optional<EmFitReport> em;
    std::optional<HmmParams> hmm_params;
    double kde_bandwidth = 0.0;
    bool kde_degenerate = false;
    std::size_t n_candidates = 0;
    std::size_t n_calibration = 0;
    std::size_t n_sentinel = 0;
    std::size_t n_clamped = 0;
    /// q-value thresholding and e-BH on the generalized e-values both reproduce the decisions.
    bool equivalences_hold = true;
};

struct ProcedureResult {
    DecisionVector decisions;
    double tau = no_threshold;
    std::vector<double> q_values;
    std::vector<double> e_values;
    /// Calibration values in the z scale and the resulting score pairs.
    std::vector<double> calibration;
    ScorePairVector scores;
    ProcedureDiagnostics diagnostics;

    std::size_t n_rejected() const { return count_ones(decisions); }
};

/// Score pairs plus whatever the model fit reported.
struct ScoredData {
    ScorePairVector scores;
    ProcedureDiagnostics diagnostics;
};

/// Fits the working model on W only and scores both sides. Values are in the z scale.
ScoredData score_pairs(const PairedData& paired, const WorkingModelSpec& model);

/// Mirror decision, q-values, e-values and the equivalence self-check on given scores.
ProcedureResult decide(ScoredData scored, double alpha);

/// Draws m calibration values from F0 with `Rng(seed, run)`.
std::vector<double> draw_calibration(const NullDistribution& f0, std::size_t m, std::uint64_t seed,
                                     std::uint64_t run = 0);

/// Maps values to z-values under F0; counts clamped entries into `n_clamped`.
std::vector<double> to_z_values(std::span<const double> x, const NullDistribution& f0, std::size_t* n_clamped = nullptr);

/// Supervised PLIS with known null F0.
ProcedureResult run_plis(std::span<const double> x, const NullDistribution& f0, const WorkingModelSpec& model, double alpha,
                     std::uint64_t seed);

/// Calibration and training split of a null pool: the first m entries of a seeded permutation
/// calibrate, the rest train. Throws `insufficient_nulls` when the pool has fewer than 2m values.
struct NullSplit {
    std::vector<double> calibration;
    std::vector<double> training;
};
NullSplit split_nulls(std::span<const double> nulls, std::size_t m, std::uint64_t seed);

/**
 * Semi-supervised PLIS with an unknown null and a pool of null samples.
 * HMM: the null emission is frozen at the Gaussian fitted to the training split.
 * Two-group: the density ratio is KDE(training) / KDE(W).
 */
ProcedureResult semi_supervised_plis(std::span<const double> x, std::span<const double> nulls,
                                     const WorkingModelSpec& model, double alpha, std::uint64_t seed);

/// Scores of N independent calibration draws; run k uses `Rng(seed, k)`.
std::vector<ScorePairVector> derandomized_scores(std::span<const double> x, const NullDistribution& f0,
                                                 const WorkingModelSpec& model, std::size_t n_runs,
                                                 std::uint64_t seed);

/// Averages the generalized e-values of every run (run k thresholded at alphas[k]) and applies e-BH at alpha.
ProcedureResult derandomize(std::span<const ScorePairVector> runs, std::span<const double> alphas, double alpha);

ProcedureResult derandomized_plis(std::span<const double> x, const NullDistribution& f0, const WorkingModelSpec& model,
                                  std::size_t n_runs, std::span<const double> alphas, double alpha, std::uint64_t seed);

/// Posterior null probabilities from an HMM fitted directly on x (null emission frozen at N(0, 1)).
std::vector<double> lis_statistics(std::span<const double> x, const EmConfig& em = {});

} // namespace plis

#endif // PLIS_PROCEDURES_HPP
