#ifndef PLIS_HMM_HPP
#define PLIS_HMM_HPP

#include <array>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "plis/baseline.hpp"
#include "plis/scores.hpp"

namespace plis {

struct GaussianEmission {
    double mean = 0.0;
    double sd = 1.0;
};

/**
 * Two-state homogeneous HMM with Gaussian emissions.
 * State 0 is the null state. `transition[i][j]` = P(theta_{t+1} = j | theta_t = i).
 */
struct HmmParams {
    std::array<double, 2> initial{0.9, 0.1};
    std::array<std::array<double, 2>, 2> transition{{{0.9, 0.1}, {0.2, 0.8}}};
    GaussianEmission null_emission{0.0, 1.0};
    GaussianEmission signal_emission{2.0, 1.0};
    /// When set, EM leaves `null_emission` untouched.
    bool null_frozen = true;

    /// Throws `ErrorKind::invalid_argument` when a probability or sd is out of range.
    void validate() const;

    /// Plain `key = value` text, one parameter per line.
    std::string to_key_value() const;
    static HmmParams from_key_value(const std::string& text);
};

struct EmConfig {
    std::size_t max_iter = 500;
    /// Stop when |ll_new - ll_old| / |ll_old| falls below this. Infinity returns the start point.
    double tol = 1e-6;
    /// Start point; defaults to `default_em_start(w, null)` when empty.
    std::optional<HmmParams> init;
    /// Null emission to hold fixed. When empty, the null emission is estimated too.
    std::optional<GaussianEmission> frozen_null = GaussianEmission{0.0, 1.0};
    /// Emission sds are not allowed below this value.
    double min_sd = 1e-3;
};

struct EmFitReport {
    std::size_t iterations = 0;
    double log_likelihood = -std::numeric_limits<double>::infinity();
    bool converged = false;
    /// A state lost all responsibility mass and the fit fell back to the start point.
    bool degenerate = false;
    std::vector<double> trace;
};

struct EmFit {
    HmmParams params;
    EmFitReport report;
};

/**
 * Documented start point: initial (0.9, 0.1), transitions [[0.9, 0.1], [0.2, 0.8]], unit sds,
 * the given null mean, and a signal mean equal to the mean of the top decile of |w|.
 */
HmmParams default_em_start(std::span<const double> w, GaussianEmission null_emission = {});

/// Baum-Welch on `w` (length >= 2). The log-likelihood trace is non-decreasing.
EmFit em_fit(std::span<const double> w, const EmConfig& config = {});

/// Log-likelihood of the sequence under `params`.
double log_likelihood(std::span<const double> seq, const HmmParams& params);

/// P(theta_i = 0 | seq) for every position, via scaled forward-backward with log-shifted emissions.
std::vector<double> forward_backward(std::span<const double> seq, const HmmParams& params);

/**
 * PLIS scores under the HMM working model: s^X_i = P(theta_i = 0 | W with x_i at position i)
 * and likewise for y_i. Forward and backward messages of the baseline run are reused, so the
 * whole vector costs O(m).
 */
ScorePairVector plis_scores_hmm(const PairedData& paired, const HmmParams& params);

/// The same scores by a full forward-backward pass per substituted sequence, O(m^2).
ScorePairVector plis_scores_hmm_naive(const PairedData& paired, const HmmParams& params);

} // namespace plis

#endif // PLIS_HMM_HPP
