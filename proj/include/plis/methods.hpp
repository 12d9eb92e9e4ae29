#ifndef PLIS_METHODS_HPP
#define PLIS_METHODS_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "plis/core.hpp"
#include "plis/distributions.hpp"

/**
 * @file methods.hpp
 *
 * @brief Name-keyed registry of testing methods for plans and the command line.
 *
 * A method is written `name` or `name[key=value; key=value]`. Known names:
 *
 *   plis_hm, plis_tg          supervised PLIS with the HMM or two-group working model
 *   plis_hm_ss, plis_tg_ss    semi-supervised PLIS (needs a null pool)
 *   plis_cbh_hm, plis_sym_hm  the conformal-BH and anti-symmetric variants on HMM scores
 *   derand_hm, derand_tg      derandomized PLIS; options n (runs, default 30), ak (alpha_k / alpha, default 0.5)
 *   adadetect, adadetect_ss   conformal BH on density-ratio scores from a KDE of the pooled data
 *   bh                        BH on two-sided normal p-values
 *   lis                       posterior-null ranking from an HMM fitted directly on the data
 *
 * PLIS methods accept combiner=max_abs|additive; HMM methods accept null=known|estimated;
 * two-group methods accept bandwidth=<h>; adadetect methods accept storey=true|false.
 */

namespace plis {

struct MethodInput {
    std::span<const double> x;
    /// Null pool for semi-supervised methods.
    std::span<const double> nulls;
    NullDistribution f0;
    double alpha = 0.05;
    /// Seed of the calibration draws; shared by all methods run on the same data.
    std::uint64_t seed = 0;
};

struct MethodOutput {
    DecisionVector decisions;
    /// Generalized e-values when the method produces them; otherwise empty.
    std::vector<double> e_values;
};

class Method {
public:
    const std::string& name() const { return name_; }
    /// Canonical text `name[key=value; ...]` with options in key order.
    const std::string& label() const { return label_; }
    bool needs_nulls() const { return needs_nulls_; }
    MethodOutput run(const MethodInput& input) const { return run_(input); }

private:
    friend Method resolve_method(const std::string& text);
    std::string name_;
    std::string label_;
    bool needs_nulls_ = false;
    std::function<MethodOutput(const MethodInput&)> run_;
};

/// Parses and validates a method string; throws `config_error` for unknown names or options.
Method resolve_method(const std::string& text);

std::vector<std::string> method_names();

/// Splits `name[a=1; b=2]` into the name and its options.
std::pair<std::string, std::map<std::string, std::string>> parse_method_text(const std::string& text);

} // namespace plis

#endif // PLIS_METHODS_HPP
