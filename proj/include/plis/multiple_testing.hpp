#ifndef PLIS_MULTIPLE_TESTING_HPP
#define PLIS_MULTIPLE_TESTING_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "plis/core.hpp"
#include "plis/scores.hpp"

/**
 * @file multiple_testing.hpp
 *
 * @brief Classical and score-based rejection rules used alongside the mirror procedure.
 *
 * Every rule returns a DecisionVector aligned with its input.
 */

namespace plis {

/// Benjamini-Hochberg step-up: reject the k smallest p-values, k = max{i : p_(i) <= i alpha / m}.
DecisionVector bh(std::span<const double> p, double alpha);

/// Relative slack in the e-BH comparison so that boundary cases survive rounding.
inline constexpr double e_bh_slack = 1e-12;

/// e-BH: k = max{i : (i/m) e_(i) >= 1/alpha} over decreasing e-values; reject e_j >= e_(k).
DecisionVector e_bh(std::span<const double> e, double alpha);

/// Two-sided normal p-values 2(1 - Phi(|z|)).
std::vector<double> two_sided_p_values(std::span<const double> z);

/// p_i = (1 + #{j : s^X_i > s^Y_j}) / (1 + n) with n calibration scores.
std::vector<double> conformal_p_values(std::span<const double> sx, std::span<const double> sy);

/// Storey's plug-in 1 / pi0 with pi0 = (1 + #{p > lambda}) / (m (1 - lambda)), never below 1.
double storey_adaptive_factor(std::span<const double> p, double lambda = 0.5);

/// BH at level alpha * adaptive_factor on conformal p-values.
DecisionVector conformal_bh(std::span<const double> sx, std::span<const double> sy, double alpha,
                            double adaptive_factor = 1.0);

/**
 * Conformal-BH style variant of the mirror rule: the threshold is the largest t among the test
 * scores with (1 + #{j : s^Y_j <= t}) / max(#{j : s^X_j <= t}, 1) <= alpha, counting every unit,
 * and all units with s^X_i <= threshold are rejected.
 */
DecisionVector plis_cbh(const ScorePairVector& scores, double alpha);

/**
 * Anti-symmetric variant: T_j = s^Y_j - s^X_j and the threshold is the smallest t in {|T_j| > 0}
 * with (1 + #{T_j <= -t}) / #{T_j >= t} <= alpha. Candidates with an empty denominator are skipped.
 */
DecisionVector plis_sym(const ScorePairVector& scores, double alpha);

/**
 * Selective SeqStep+ over p-values already in ranking order.
 * `stops` holds the admissible stopping sizes k (1-based, increasing). Returns the rejection
 * indicator in ranking order.
 */
DecisionVector selective_seqstep_plus(std::span<const double> p, double c, double alpha,
                                      std::span<const std::size_t> stops);

/// 1-bit p-values: 1/2 for T > 0 and 1 otherwise.
std::vector<double> one_bit_p_values(std::span<const double> t);

/**
 * Knockoff+ filter on statistics T run as Selective SeqStep+ with c = 1/2 on 1-bit p-values:
 * units are ranked by decreasing |T|, stops sit at the ends of groups of equal |T|, and units
 * with T = 0 are dropped.
 */
DecisionVector knockoff_plus(std::span<const double> t, double alpha);

/// T^S_j = sign(s^Y_j - s^X_j) * max(exp(-s^X_j), exp(-s^Y_j)).
std::vector<double> antisymmetric_statistics(const ScorePairVector& scores);

/// Posterior-null ranking rule: reject the k smallest values, k = max{k : mean of the k smallest <= alpha}.
DecisionVector lis_rule(std::span<const double> lis, double alpha);

} // namespace plis

#endif // PLIS_MULTIPLE_TESTING_HPP
