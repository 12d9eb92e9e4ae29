#ifndef PLIS_BASELINE_HPP
#define PLIS_BASELINE_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace plis {

/// Symmetric functions h(x, y) = h(y, x) used to build the baseline data.
enum class Combiner { max_abs, additive };

Combiner parse_combiner(const std::string& name);
const char* to_string(Combiner combiner);

/// Keeps the value of larger magnitude. On |x| == |y| it returns x, so (-a, a) is the one
/// measure-zero case where the arguments do not commute.
inline double combine_max_abs(double x, double y) {
    return std::fabs(x) >= std::fabs(y) ? x : y;
}

inline double combine_additive(double x, double y) {
    return x + y;
}

double combine(Combiner combiner, double x, double y);

/// Which value replaces the baseline entry at the substituted position.
enum class Side { test, calibration };

/**
 * Aligned test values x, calibration values y and baseline values w = h(x, y).
 */
class PairedData {
public:
    PairedData(std::vector<double> x, std::vector<double> y, Combiner combiner);

    std::size_t size() const { return w_.size(); }
    std::span<const double> x() const { return x_; }
    std::span<const double> y() const { return y_; }
    std::span<const double> w() const { return w_; }
    Combiner combiner() const { return combiner_; }

    double value(Side side, std::size_t i) const { return side == Side::test ? x_[i] : y_[i]; }

private:
    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> w_;
    Combiner combiner_;
};

/// Builds the paired data; throws on length mismatch or non-finite input.
PairedData build_paired(std::vector<double> x, std::vector<double> y, Combiner combiner);

/**
 * The baseline sequence with one position overridden: (w_1, ..., w_{i-1}, v, w_{i+1}, ..., w_m).
 * A view: it refers to the baseline storage of the PairedData it came from.
 */
class SubstitutedSequence {
public:
    SubstitutedSequence(std::span<const double> base, std::size_t position, double value)
        : base_(base), position_(position), value_(value) {}

    std::size_t size() const { return base_.size(); }
    std::size_t position() const { return position_; }
    double substituted_value() const { return value_; }
    double operator[](std::size_t j) const { return j == position_ ? value_ : base_[j]; }

    std::vector<double> materialize() const;

private:
    std::span<const double> base_;
    std::size_t position_;
    double value_;
};

/// Throws `ErrorKind::out_of_range` when i >= paired.size().
SubstitutedSequence substitute(const PairedData& paired, std::size_t i, Side side);

} // namespace plis

#endif // PLIS_BASELINE_HPP
