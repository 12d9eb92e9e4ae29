#ifndef PLIS_CORE_HPP
#define PLIS_CORE_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

/**
 * @file core.hpp
 *
 * @brief Shared value types and ground-truth metrics.
 *
 * Hypotheses are indexed by an ordered one-dimensional sequence 0..m-1.
 * Binary vectors use one byte per entry; any non-zero byte is read as 1.
 */

namespace plis {

/// Per-hypothesis truth: 0 = null, 1 = non-null.
using TruthVector = std::vector<std::uint8_t>;

/// Per-hypothesis decision: 1 = reject the null.
using DecisionVector = std::vector<std::uint8_t>;

struct MetricsPair {
    double fdp = 0.0;
    double tdp = 0.0;
};

/**
 * False discovery proportion and true discovery proportion of `decisions` against `truth`.
 * Both denominators are guarded by a floor of one, so an empty rejection set has zero FDP
 * and a truth vector without signals has zero TDP.
 *
 * Throws `Error` with `ErrorKind::length_mismatch` when the lengths differ.
 */
MetricsPair compute_fdp_tdp(std::span<const std::uint8_t> decisions, std::span<const std::uint8_t> truth);

/// Number of non-zero entries.
std::size_t count_ones(std::span<const std::uint8_t> v);

/// Converts a list of 0-based indices into a decision vector of length `m`.
DecisionVector indices_to_decisions(std::span<const std::size_t> indices, std::size_t m);

/// 0-based indices of the non-zero entries.
std::vector<std::size_t> decisions_to_indices(std::span<const std::uint8_t> decisions);

/// Rejects NaN and infinite observations at ingestion. `what` names the data in the message.
void require_finite(std::span<const double> values, const char* what);

} // namespace plis

#endif // PLIS_CORE_HPP
