#ifndef PLIS_ACCEPTANCE_HPP
#define PLIS_ACCEPTANCE_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

/**
 * @file acceptance.hpp
 *
 * @brief Reproduction checks at desk scale (m = 2000, 200 replications by default).
 *
 * Each check prints one PASS/FAIL line. Monte-Carlo tolerances are in standard errors: SE of a
 * mean is the sample sd over sqrt(n), and comparisons between two methods use the SE of the
 * per-replication paired difference, since both methods run on the same data.
 */

namespace plis {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceOptions {
    std::size_t reps = 200;
    std::size_t threads = 0;
    std::uint64_t seed = 20240917;
    /// Criteria to run (1..12); empty runs all.
    std::vector<int> criteria;
    /// When non-empty, raw and summary CSVs of the simulation checks are written under this prefix.
    std::string out_prefix;
};

inline constexpr int acceptance_criteria_count = 12;

std::string criterion_title(int id);

/// Runs the selected checks in order and reports each result through `report` as it finishes.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            const std::function<void(const CriterionResult&)>& report = {});

std::string format_result_line(const CriterionResult& result);

} // namespace plis

#endif // PLIS_ACCEPTANCE_HPP
