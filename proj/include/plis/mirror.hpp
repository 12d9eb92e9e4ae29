#ifndef PLIS_MIRROR_HPP
#define PLIS_MIRROR_HPP

#include <cstddef>
#include <limits>
#include <vector>

#include "plis/core.hpp"
#include "plis/scores.hpp"

/**
 * @file mirror.hpp
 *
 * @brief Mirror FDP process, threshold selection, conformal q-values and generalized e-values.
 *
 * With candidate set R = {i : s^X_i < s^Y_i} and calibration set C = {i : s^Y_i < s^X_i},
 *
 *     Q(t) = (1 + #{j in C : s^Y_j <= t}) / max(#{j in R : s^X_j <= t}, 1).
 *
 * The threshold is the largest score value t (over all test and calibration scores) with
 * Q(t) <= alpha, and unit i is rejected when i is in R and s^X_i <= threshold.
 * Units with tied scores belong to neither set.
 */

namespace plis {

inline constexpr double no_threshold = -std::numeric_limits<double>::infinity();

/// Q(t) evaluated directly from its definition.
double mirror_q(double t, const ScorePairVector& scores);

/**
 * Q evaluated on the sorted grid of distinct score values, built in one O(m log m) sweep.
 * `q[k]` is Q(grid[k]); `suffix_min[k]` is the minimum of q over positions k and later.
 */
struct MirrorPath {
    std::vector<double> grid;
    std::vector<double> q;
    std::vector<double> suffix_min;
    std::vector<std::size_t> mirror_count;    ///< numerator count without the +1
    std::vector<std::size_t> candidate_count; ///< denominator count before the max(., 1)
};

MirrorPath mirror_path(const ScorePairVector& scores);

/// Largest grid value with Q <= alpha, or `no_threshold` when there is none.
double select_threshold(const ScorePairVector& scores, double alpha);
double select_threshold(const MirrorPath& path, double alpha);

struct MirrorDecision {
    double tau = no_threshold;
    DecisionVector decisions;
    std::size_t n_candidates = 0;
    std::size_t n_calibration = 0;
    std::size_t n_rejected = 0;
    std::size_t mirror_count_at_tau = 0; ///< #{j in C : s^Y_j <= tau}
};

MirrorDecision mirror_decide(const ScorePairVector& scores, double alpha);

/// Rejects {i in R : s^X_i <= tau}.
DecisionVector decisions_at(const ScorePairVector& scores, double tau);

/**
 * Conformal q-values: for i in R, the minimum of Q(t) over grid points t >= s^X_i; 1 otherwise.
 * Candidate q-values are not capped and may exceed 1.
 */
std::vector<double> conformal_q_values(const ScorePairVector& scores);
std::vector<double> conformal_q_values(const ScorePairVector& scores, const MirrorPath& path);

/// e_j = m * delta_j / (1 + #{i in C : s^Y_i <= tau}); all zero when tau is `no_threshold`.
std::vector<double> generalized_e_values(const ScorePairVector& scores, double tau, std::size_t m);

} // namespace plis

#endif // PLIS_MIRROR_HPP
