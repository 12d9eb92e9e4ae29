#include "plis/core.hpp"

#include <cmath>
#include <string>

#include "plis/error.hpp"

namespace plis {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::length_mismatch:
        return "length mismatch";
    case ErrorKind::out_of_range:
        return "index out of range";
    case ErrorKind::invalid_argument:
        return "invalid argument";
    case ErrorKind::non_finite_input:
        return "non-finite input";
    case ErrorKind::insufficient_nulls:
        return "insufficient null samples";
    case ErrorKind::parse_error:
        return "parse error";
    case ErrorKind::config_error:
        return "configuration error";
    case ErrorKind::io_error:
        return "i/o error";
    }
    return "error";
}

MetricsPair compute_fdp_tdp(std::span<const std::uint8_t> decisions, std::span<const std::uint8_t> truth) {
    if (decisions.size() != truth.size()) {
        throw Error(ErrorKind::length_mismatch, "decisions have " + std::to_string(decisions.size()) +
                                                    " entries but truth has " + std::to_string(truth.size()));
    }
    std::size_t rejected = 0, false_rejected = 0, signals = 0, true_rejected = 0;
    for (std::size_t j = 0; j < decisions.size(); ++j) {
        const bool d = decisions[j] != 0;
        const bool t = truth[j] != 0;
        rejected += d;
        signals += t;
        false_rejected += d && !t;
        true_rejected += d && t;
    }
    MetricsPair out;
    out.fdp = static_cast<double>(false_rejected) / static_cast<double>(rejected > 0 ? rejected : 1);
    out.tdp = static_cast<double>(true_rejected) / static_cast<double>(signals > 0 ? signals : 1);
    return out;
}

std::size_t count_ones(std::span<const std::uint8_t> v) {
    std::size_t n = 0;
    for (auto b : v) {
        n += (b != 0);
    }
    return n;
}

DecisionVector indices_to_decisions(std::span<const std::size_t> indices, std::size_t m) {
    DecisionVector out(m, 0);
    for (auto i : indices) {
        if (i >= m) {
            throw Error(ErrorKind::out_of_range, "index " + std::to_string(i) + " outside [0, " + std::to_string(m) + ")");
        }
        out[i] = 1;
    }
    return out;
}

std::vector<std::size_t> decisions_to_indices(std::span<const std::uint8_t> decisions) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < decisions.size(); ++i) {
        if (decisions[i] != 0) {
            out.push_back(i);
        }
    }
    return out;
}

void require_finite(std::span<const double> values, const char* what) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw Error(ErrorKind::non_finite_input,
                        std::string(what) + " contains a non-finite value at position " + std::to_string(i));
        }
    }
}

} // namespace plis
