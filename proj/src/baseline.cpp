#include "plis/baseline.hpp"

#include "plis/core.hpp"
#include "plis/error.hpp"

namespace plis {

Combiner parse_combiner(const std::string& name) {
    if (name == "max_abs" || name == "max-abs" || name == "maxabs") {
        return Combiner::max_abs;
    }
    if (name == "additive" || name == "sum") {
        return Combiner::additive;
    }
    throw Error(ErrorKind::config_error, "unknown combiner '" + name + "' (expected max_abs or additive)");
}

const char* to_string(Combiner combiner) {
    return combiner == Combiner::max_abs ? "max_abs" : "additive";
}

double combine(Combiner combiner, double x, double y) {
    return combiner == Combiner::max_abs ? combine_max_abs(x, y) : combine_additive(x, y);
}

PairedData::PairedData(std::vector<double> x, std::vector<double> y, Combiner combiner)
    : x_(std::move(x)), y_(std::move(y)), combiner_(combiner) {
    if (x_.size() != y_.size()) {
        throw Error(ErrorKind::length_mismatch, "test data has " + std::to_string(x_.size()) +
                                                    " values but calibration data has " + std::to_string(y_.size()));
    }
    require_finite(x_, "test data");
    require_finite(y_, "calibration data");
    w_.resize(x_.size());
    for (std::size_t i = 0; i < x_.size(); ++i) {
        w_[i] = combine(combiner_, x_[i], y_[i]);
    }
}

PairedData build_paired(std::vector<double> x, std::vector<double> y, Combiner combiner) {
    return PairedData(std::move(x), std::move(y), combiner);
}

std::vector<double> SubstitutedSequence::materialize() const {
    std::vector<double> out(base_.begin(), base_.end());
    out[position_] = value_;
    return out;
}

SubstitutedSequence substitute(const PairedData& paired, std::size_t i, Side side) {
    if (i >= paired.size()) {
        throw Error(ErrorKind::out_of_range,
                    "position " + std::to_string(i) + " outside a sequence of length " + std::to_string(paired.size()));
    }
    return SubstitutedSequence(paired.w(), i, paired.value(side, i));
}

} // namespace plis
