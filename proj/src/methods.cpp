#include "plis/methods.hpp"

#include <algorithm>
#include <cmath>

#include "plis/config.hpp"
#include "plis/error.hpp"
#include "plis/multiple_testing.hpp"
#include "plis/procedures.hpp"
#include "plis/twogroup.hpp"

namespace plis {

namespace {

const std::vector<std::string>& known_names() {
    static const std::vector<std::string> names = {
        "plis_hm",   "plis_tg",     "plis_hm_ss",  "plis_tg_ss", "plis_cbh_hm", "plis_sym_hm",
        "derand_hm", "derand_tg",   "adadetect",   "adadetect_ss", "bh",        "lis",
    };
    return names;
}

class Options {
public:
    Options(std::string method, std::map<std::string, std::string> values)
        : method_(std::move(method)), values_(std::move(values)) {}

    std::string take(const std::string& key, const std::string& fallback) {
        auto it = values_.find(key);
        if (it == values_.end()) {
            return fallback;
        }
        std::string v = it->second;
        values_.erase(it);
        return v;
    }

    double take_double(const std::string& key, double fallback) {
        auto text = take(key, "");
        return text.empty() ? fallback : parse_double(text, method_ + " option " + key);
    }

    bool take_bool(const std::string& key, bool fallback) {
        auto text = take(key, "");
        if (text.empty()) {
            return fallback;
        }
        if (text == "true" || text == "1") {
            return true;
        }
        if (text == "false" || text == "0") {
            return false;
        }
        throw Error(ErrorKind::config_error, method_ + " option " + key + " expects true or false");
    }

    void finish() const {
        if (!values_.empty()) {
            throw Error(ErrorKind::config_error, "method " + method_ + " has no option '" + values_.begin()->first + "'");
        }
    }

private:
    std::string method_;
    std::map<std::string, std::string> values_;
};

WorkingModelSpec model_from(Options& options, ModelKind kind) {
    WorkingModelSpec model = kind == ModelKind::hmm ? WorkingModelSpec::hmm() : WorkingModelSpec::two_group();
    model.combiner = parse_combiner(options.take("combiner", "max_abs"));
    if (kind == ModelKind::hmm) {
        const auto null = options.take("null", "known");
        if (null != "known" && null != "estimated") {
            throw Error(ErrorKind::config_error, "option null expects known or estimated, got '" + null + "'");
        }
        model.estimate_null = null == "estimated";
    } else {
        const double h = options.take_double("bandwidth", 0.0);
        if (h < 0.0) {
            throw Error(ErrorKind::config_error, "bandwidth must be positive");
        }
        if (h > 0.0) {
            model.bandwidth = h;
        }
    }
    return model;
}

MethodOutput from_result(ProcedureResult result) {
    return {std::move(result.decisions), std::move(result.e_values)};
}

/// Density-ratio scores from a KDE of the pooled test and calibration values.
MethodOutput pooled_conformal_bh(std::span<const double> x, std::span<const double> y, const DensityRatio& ratio,
                                 double alpha, bool storey) {
    std::vector<double> sx(x.size()), sy(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx[i] = ratio(x[i]).value;
    }
    for (std::size_t j = 0; j < y.size(); ++j) {
        sy[j] = ratio(y[j]).value;
    }
    const double factor = storey ? storey_adaptive_factor(conformal_p_values(sx, sy)) : 1.0;
    return {conformal_bh(sx, sy, alpha, factor), {}};
}

std::vector<double> pooled(std::span<const double> a, std::span<const double> b) {
    std::vector<double> out(a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

} // namespace

std::pair<std::string, std::map<std::string, std::string>> parse_method_text(const std::string& text) {
    const auto trimmed = trim(text);
    const auto open = trimmed.find('[');
    std::map<std::string, std::string> options;
    if (open == std::string::npos) {
        return {trimmed, options};
    }
    if (trimmed.back() != ']') {
        throw Error(ErrorKind::config_error, "method '" + trimmed + "' has an unterminated option list");
    }
    const auto name = trim(trimmed.substr(0, open));
    for (const auto& item : split_top_level(trimmed.substr(open + 1, trimmed.size() - open - 2), ';')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorKind::config_error, "method option '" + item + "' is not key=value");
        }
        const auto key = trim(item.substr(0, eq));
        if (!options.emplace(key, trim(item.substr(eq + 1))).second) {
            throw Error(ErrorKind::config_error, "method option '" + key + "' given twice");
        }
    }
    return {name, options};
}

std::vector<std::string> method_names() {
    return known_names();
}

Method resolve_method(const std::string& text) {
    auto [name, raw] = parse_method_text(text);
    const auto& names = known_names();
    if (std::find(names.begin(), names.end(), name) == names.end()) {
        throw Error(ErrorKind::config_error, "unknown method '" + name + "'");
    }
    Method method;
    method.name_ = name;
    method.label_ = name;
    if (!raw.empty()) {
        std::string joined;
        for (const auto& [k, v] : raw) {
            joined += (joined.empty() ? "" : "; ") + k + "=" + v;
        }
        method.label_ += "[" + joined + "]";
    }
    Options options(name, raw);

    if (name == "plis_hm" || name == "plis_tg") {
        const auto model = model_from(options, name == "plis_hm" ? ModelKind::hmm : ModelKind::two_group);
        method.run_ = [model](const MethodInput& in) { return from_result(run_plis(in.x, in.f0, model, in.alpha, in.seed)); };
    } else if (name == "plis_hm_ss" || name == "plis_tg_ss") {
        const auto model = model_from(options, name == "plis_hm_ss" ? ModelKind::hmm : ModelKind::two_group);
        method.needs_nulls_ = true;
        method.run_ = [model](const MethodInput& in) {
            return from_result(semi_supervised_plis(in.x, in.nulls, model, in.alpha, in.seed));
        };
    } else if (name == "plis_cbh_hm" || name == "plis_sym_hm") {
        const auto model = model_from(options, ModelKind::hmm);
        const bool cbh = name == "plis_cbh_hm";
        method.run_ = [model, cbh](const MethodInput& in) {
            const auto result = run_plis(in.x, in.f0, model, in.alpha, in.seed);
            return MethodOutput{cbh ? plis_cbh(result.scores, in.alpha) : plis_sym(result.scores, in.alpha), {}};
        };
    } else if (name == "derand_hm" || name == "derand_tg") {
        const auto model = model_from(options, name == "derand_hm" ? ModelKind::hmm : ModelKind::two_group);
        const double n = options.take_double("n", 30.0);
        const double ak = options.take_double("ak", 0.5);
        if (!(n >= 1.0) || n != std::floor(n)) {
            throw Error(ErrorKind::config_error, "option n must be a positive integer");
        }
        if (!(ak > 0.0)) {
            throw Error(ErrorKind::config_error, "option ak must be positive");
        }
        method.run_ = [model, n, ak](const MethodInput& in) {
            const std::vector<double> alphas(static_cast<std::size_t>(n), ak * in.alpha);
            return from_result(derandomized_plis(in.x, in.f0, model, alphas.size(), alphas, in.alpha, in.seed));
        };
    } else if (name == "adadetect") {
        const bool storey = options.take_bool("storey", false);
        const double h = options.take_double("bandwidth", 0.0);
        method.run_ = [storey, h](const MethodInput& in) {
            const auto zx = to_z_values(in.x, in.f0);
            const auto zy = to_z_values(draw_calibration(in.f0, in.x.size(), in.seed), in.f0);
            const auto all = pooled(zx, zy);
            const DensityRatio ratio(NullDistribution::normal(), kde_fit(all, h > 0.0 ? std::optional(h) : std::nullopt));
            return pooled_conformal_bh(zx, zy, ratio, in.alpha, storey);
        };
    } else if (name == "adadetect_ss") {
        const bool storey = options.take_bool("storey", false);
        method.needs_nulls_ = true;
        method.run_ = [storey](const MethodInput& in) {
            auto split = split_nulls(in.nulls, in.x.size(), in.seed);
            const DensityRatio ratio(kde_fit(split.training), kde_fit(pooled(in.x, split.calibration)));
            return pooled_conformal_bh(in.x, split.calibration, ratio, in.alpha, storey);
        };
    } else if (name == "bh") {
        method.run_ = [](const MethodInput& in) {
            return MethodOutput{bh(two_sided_p_values(to_z_values(in.x, in.f0)), in.alpha), {}};
        };
    } else if (name == "lis") {
        method.run_ = [](const MethodInput& in) {
            return MethodOutput{lis_rule(lis_statistics(to_z_values(in.x, in.f0)), in.alpha), {}};
        };
    }
    options.finish();
    return method;
}

} // namespace plis
