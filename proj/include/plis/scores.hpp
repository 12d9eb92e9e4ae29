#ifndef PLIS_SCORES_HPP
#define PLIS_SCORES_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace plis {

/// Set membership of a unit given its score pair. Smaller scores are more significant.
enum class Membership {
    candidate,   ///< s^X < s^Y: may be rejected
    calibration, ///< s^Y < s^X: its s^Y enters the mirror count
    tie,         ///< s^X == s^Y: ignored by the mirror process
};

/**
 * Per-unit test and calibration conformity scores (s^X_i, s^Y_i).
 * Scores must not be NaN; comparisons between them are exact.
 */
class ScorePairVector {
public:
    ScorePairVector() = default;
    ScorePairVector(std::vector<double> sx, std::vector<double> sy);

    std::size_t size() const { return sx_.size(); }
    std::span<const double> sx() const { return sx_; }
    std::span<const double> sy() const { return sy_; }
    double sx(std::size_t i) const { return sx_[i]; }
    double sy(std::size_t i) const { return sy_[i]; }

    Membership membership(std::size_t i) const {
        return sx_[i] < sy_[i] ? Membership::candidate
                               : (sy_[i] < sx_[i] ? Membership::calibration : Membership::tie);
    }

    std::size_t count(Membership which) const;

private:
    std::vector<double> sx_;
    std::vector<double> sy_;
};

} // namespace plis

#endif // PLIS_SCORES_HPP
