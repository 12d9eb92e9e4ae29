#ifndef PLIS_VERIFICATION_HPP
#define PLIS_VERIFICATION_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "plis/procedures.hpp"

/**
 * @file verification.hpp
 *
 * @brief Brute-force reference computations and property probes.
 *
 * The oracles in `plis::oracle` are written from the definitions with plain loops and do not
 * call into the library, so agreement with the production code is evidence for both.
 */

namespace plis::oracle {

/// Two-state Gaussian HMM written out in plain arrays.
struct Hmm {
    double initial[2] = {0.5, 0.5};
    double transition[2][2] = {{0.5, 0.5}, {0.5, 0.5}};
    double mean[2] = {0.0, 0.0};
    double sd[2] = {1.0, 1.0};
};

/// P(theta_i = 0 | seq) by summing over all 2^m state paths. Refuses m > 16.
std::vector<double> posterior(const std::vector<double>& seq, const Hmm& hmm);

/// log P(seq) by summing over all 2^m state paths. Refuses m > 16.
double log_likelihood(const std::vector<double>& seq, const Hmm& hmm);

/**
 * Largest value t among all test and calibration scores whose mirror ratio, recounted from
 * scratch at t, is at most alpha; -infinity when none. Refuses more than 1000 units.
 */
double threshold(const std::vector<double>& sx, const std::vector<double>& sy, double alpha);

/// Units with s^X < s^Y and s^X <= threshold(sx, sy, alpha).
std::vector<std::uint8_t> mirror_rejections(const std::vector<double>& sx, const std::vector<double>& sy,
                                            double alpha);

} // namespace plis::oracle

namespace plis {

struct ExchangeabilityReport {
    std::size_t trials = 0;
    /// Index swaps whose score pair did not exchange exactly, or that moved another pair.
    std::size_t swap_violations = 0;
    /// Trials where exchanging two distinct test values changed a score at a third index.
    std::size_t joint_changes = 0;
    /// Trials where exchanging two equal test values changed any score.
    std::size_t degenerate_changes = 0;
};

/**
 * Random instances of length m drawn from a two-state chain. Per trial: (a) every swap x_i <-> y_i
 * must exchange (s^X_i, s^Y_i) and leave all other pairs untouched; (b) exchanging x_i <-> x_j
 * for i != j is checked for a change in some s_k, k not in {i, j}; (c) the same exchange with
 * x_i = x_j must change nothing.
 */
ExchangeabilityReport exchangeability_probe(const WorkingModelSpec& model, std::size_t m, std::size_t trials,
                                            std::uint64_t seed);

} // namespace plis

#endif // PLIS_VERIFICATION_HPP
