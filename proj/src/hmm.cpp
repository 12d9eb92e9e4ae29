#include "plis/hmm.hpp"

#include <algorithm>
#include <cmath>

#include "plis/config.hpp"
#include "plis/core.hpp"
#include "plis/distributions.hpp"
#include "plis/error.hpp"

namespace plis {

namespace {

using Pair = std::array<double, 2>;

bool is_probability(double p) {
    return p >= 0.0 && p <= 1.0;
}

/// Emission likelihoods rescaled so the larger of the two is 1 at every position.
struct ShiftedEmission {
    Pair value;
    double shift;
};

ShiftedEmission shifted_emission(double x, const HmmParams& params) {
    const double l0 = normal_log_pdf(x, params.null_emission.mean, params.null_emission.sd);
    const double l1 = normal_log_pdf(x, params.signal_emission.mean, params.signal_emission.sd);
    const double shift = std::max(l0, l1);
    return {{std::exp(l0 - shift), std::exp(l1 - shift)}, shift};
}

Pair predict(const Pair& filtered, const HmmParams& params) {
    const auto& a = params.transition;
    return {filtered[0] * a[0][0] + filtered[1] * a[1][0], filtered[0] * a[0][1] + filtered[1] * a[1][1]};
}

/// Normalized forward filter, backward messages and per-position scale factors.
struct Messages {
    std::vector<Pair> alpha;
    std::vector<Pair> beta;
    std::vector<Pair> emission;
    std::vector<double> scale;
    double log_likelihood = 0.0;
};

Messages run_messages(std::span<const double> seq, const HmmParams& params) {
    const std::size_t m = seq.size();
    Messages msg;
    msg.alpha.resize(m);
    msg.beta.resize(m);
    msg.emission.resize(m);
    msg.scale.resize(m);

    for (std::size_t t = 0; t < m; ++t) {
        const auto e = shifted_emission(seq[t], params);
        msg.emission[t] = e.value;
        const Pair pred = t == 0 ? params.initial : predict(msg.alpha[t - 1], params);
        Pair a{pred[0] * e.value[0], pred[1] * e.value[1]};
        const double c = a[0] + a[1];
        if (c > 0.0 && std::isfinite(c)) {
            a = {a[0] / c, a[1] / c};
            msg.log_likelihood += std::log(c) + e.shift;
        } else {
            const double p = pred[0] + pred[1];
            a = p > 0.0 ? Pair{pred[0] / p, pred[1] / p} : Pair{0.5, 0.5};
            msg.log_likelihood = -std::numeric_limits<double>::infinity();
        }
        msg.alpha[t] = a;
        msg.scale[t] = c > 0.0 && std::isfinite(c) ? c : 1.0;
    }

    const auto& tr = params.transition;
    msg.beta[m - 1] = {1.0, 1.0};
    for (std::size_t t = m - 1; t-- > 0;) {
        const auto& e = msg.emission[t + 1];
        const auto& b = msg.beta[t + 1];
        const double c = msg.scale[t + 1];
        msg.beta[t] = {(tr[0][0] * e[0] * b[0] + tr[0][1] * e[1] * b[1]) / c,
                       (tr[1][0] * e[0] * b[0] + tr[1][1] * e[1] * b[1]) / c};
    }
    return msg;
}

double null_posterior(const Pair& alpha, const Pair& beta) {
    const double u0 = alpha[0] * beta[0];
    const double u1 = alpha[1] * beta[1];
    const double total = u0 + u1;
    return total > 0.0 ? u0 / total : 0.5;
}

void require_sequence(std::span<const double> seq, std::size_t min_length) {
    if (seq.size() < min_length) {
        throw Error(ErrorKind::invalid_argument,
                    "sequence needs at least " + std::to_string(min_length) + " values, got " + std::to_string(seq.size()));
    }
    require_finite(seq, "sequence");
}

GaussianEmission weighted_gaussian(std::span<const double> w, const std::vector<Pair>& gamma, int state, double min_sd) {
    double mass = 0.0, sum = 0.0;
    for (std::size_t t = 0; t < w.size(); ++t) {
        mass += gamma[t][state];
        sum += gamma[t][state] * w[t];
    }
    const double mean = sum / mass;
    double ss = 0.0;
    for (std::size_t t = 0; t < w.size(); ++t) {
        const double d = w[t] - mean;
        ss += gamma[t][state] * d * d;
    }
    return {mean, std::max(std::sqrt(ss / mass), min_sd)};
}

} // namespace

void HmmParams::validate() const {
    auto fail = [](const std::string& what) { throw Error(ErrorKind::invalid_argument, "HMM parameters: " + what); };
    if (!is_probability(initial[0]) || !is_probability(initial[1]) || std::fabs(initial[0] + initial[1] - 1.0) > 1e-12) {
        fail("initial distribution must be a probability pair");
    }
    for (const auto& row : transition) {
        if (!is_probability(row[0]) || !is_probability(row[1]) || std::fabs(row[0] + row[1] - 1.0) > 1e-12) {
            fail("transition rows must be probability pairs");
        }
    }
    for (const auto* e : {&null_emission, &signal_emission}) {
        if (!std::isfinite(e->mean) || !(e->sd > 0.0) || !std::isfinite(e->sd)) {
            fail("emission means must be finite and sds positive");
        }
    }
}

std::string HmmParams::to_key_value() const {
    KeyValueConfig kv;
    kv.set("pi0", initial[0]);
    kv.set("pi1", initial[1]);
    kv.set("a00", transition[0][0]);
    kv.set("a01", transition[0][1]);
    kv.set("a10", transition[1][0]);
    kv.set("a11", transition[1][1]);
    kv.set("null_mean", null_emission.mean);
    kv.set("null_sd", null_emission.sd);
    kv.set("signal_mean", signal_emission.mean);
    kv.set("signal_sd", signal_emission.sd);
    kv.set("null_frozen", null_frozen ? "true" : "false");
    return kv.to_string();
}

HmmParams HmmParams::from_key_value(const std::string& text) {
    const auto kv = KeyValueConfig::parse(text, "<hmm params>");
    HmmParams p;
    p.initial = {kv.get_double("pi0"), kv.get_double("pi1")};
    p.transition = {{{kv.get_double("a00"), kv.get_double("a01")}, {kv.get_double("a10"), kv.get_double("a11")}}};
    p.null_emission = {kv.get_double("null_mean"), kv.get_double("null_sd")};
    p.signal_emission = {kv.get_double("signal_mean"), kv.get_double("signal_sd")};
    p.null_frozen = kv.get_bool("null_frozen", true);
    p.validate();
    return p;
}

HmmParams default_em_start(std::span<const double> w, GaussianEmission null_emission) {
    HmmParams p;
    p.null_emission = null_emission;
    std::vector<double> magnitude(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        magnitude[i] = std::fabs(w[i]);
    }
    double signal_mean = null_emission.mean + 2.0;
    if (!w.empty()) {
        std::vector<double> sorted = magnitude;
        const std::size_t keep = std::max<std::size_t>(1, w.size() / 10);
        std::nth_element(sorted.begin(), sorted.end() - static_cast<std::ptrdiff_t>(keep), sorted.end());
        const double cutoff = *(sorted.end() - static_cast<std::ptrdiff_t>(keep));
        double sum = 0.0;
        std::size_t n = 0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (magnitude[i] >= cutoff) {
                sum += magnitude[i];
                ++n;
            }
        }
        signal_mean = sum / static_cast<double>(n);
    }
    p.signal_emission = {signal_mean, 1.0};
    return p;
}

double log_likelihood(std::span<const double> seq, const HmmParams& params) {
    require_sequence(seq, 1);
    return run_messages(seq, params).log_likelihood;
}

std::vector<double> forward_backward(std::span<const double> seq, const HmmParams& params) {
    require_sequence(seq, 1);
    const auto msg = run_messages(seq, params);
    std::vector<double> out(seq.size());
    for (std::size_t t = 0; t < seq.size(); ++t) {
        out[t] = null_posterior(msg.alpha[t], msg.beta[t]);
    }
    return out;
}

EmFit em_fit(std::span<const double> w, const EmConfig& config) {
    require_sequence(w, 2);
    const std::size_t m = w.size();

    HmmParams start = config.init ? *config.init : default_em_start(w, config.frozen_null.value_or(GaussianEmission{}));
    start.null_frozen = config.frozen_null.has_value();
    if (config.frozen_null) {
        start.null_emission = *config.frozen_null;
    }
    start.validate();

    EmFit fit{start, {}};
    auto msg = run_messages(w, fit.params);
    fit.report.trace.push_back(msg.log_likelihood);
    fit.report.log_likelihood = msg.log_likelihood;
    if (std::isinf(config.tol) && config.tol > 0.0) {
        fit.report.converged = true;
        return fit;
    }

    std::vector<Pair> gamma(m);
    for (std::size_t iter = 0; iter < config.max_iter; ++iter) {
        // E-step statistics from the current messages.
        std::array<std::array<double, 2>, 2> xi_sum{};
        for (std::size_t t = 0; t < m; ++t) {
            const double g0 = null_posterior(msg.alpha[t], msg.beta[t]);
            gamma[t] = {g0, 1.0 - g0};
        }
        const auto& tr = fit.params.transition;
        for (std::size_t t = 0; t + 1 < m; ++t) {
            const auto& a = msg.alpha[t];
            const auto& e = msg.emission[t + 1];
            const auto& b = msg.beta[t + 1];
            double xi[2][2];
            double total = 0.0;
            for (int i = 0; i < 2; ++i) {
                for (int j = 0; j < 2; ++j) {
                    xi[i][j] = a[i] * tr[i][j] * e[j] * b[j];
                    total += xi[i][j];
                }
            }
            if (total > 0.0) {
                for (int i = 0; i < 2; ++i) {
                    for (int j = 0; j < 2; ++j) {
                        xi_sum[i][j] += xi[i][j] / total;
                    }
                }
            }
        }

        double mass0 = 0.0, mass1 = 0.0;
        for (const auto& g : gamma) {
            mass0 += g[0];
            mass1 += g[1];
        }
        if (mass0 < 1e-8 || mass1 < 1e-8) {
            fit.params = start;
            fit.report.degenerate = true;
            fit.report.log_likelihood = run_messages(w, start).log_likelihood;
            return fit;
        }

        // M-step.
        HmmParams next = fit.params;
        next.initial = gamma[0];
        for (int i = 0; i < 2; ++i) {
            const double row = xi_sum[i][0] + xi_sum[i][1];
            if (row > 0.0) {
                next.transition[i] = {xi_sum[i][0] / row, xi_sum[i][1] / row};
            }
        }
        next.signal_emission = weighted_gaussian(w, gamma, 1, config.min_sd);
        if (!config.frozen_null) {
            next.null_emission = weighted_gaussian(w, gamma, 0, config.min_sd);
        }

        msg = run_messages(w, next);
        const double previous = fit.report.log_likelihood;
        fit.params = next;
        fit.report.log_likelihood = msg.log_likelihood;
        fit.report.trace.push_back(msg.log_likelihood);
        ++fit.report.iterations;
        if (std::fabs(msg.log_likelihood - previous) <= config.tol * std::fabs(previous)) {
            fit.report.converged = true;
            break;
        }
    }
    return fit;
}

ScorePairVector plis_scores_hmm(const PairedData& paired, const HmmParams& params) {
    const auto w = paired.w();
    require_sequence(w, 1);
    params.validate();
    const auto msg = run_messages(w, params);

    auto score = [&](std::size_t i, double v) {
        const Pair pred = i == 0 ? params.initial : predict(msg.alpha[i - 1], params);
        const auto e = shifted_emission(v, params);
        const double u0 = pred[0] * e.value[0] * msg.beta[i][0];
        const double u1 = pred[1] * e.value[1] * msg.beta[i][1];
        const double total = u0 + u1;
        if (total > 0.0) {
            return u0 / total;
        }
        return null_posterior(pred, msg.beta[i]);
    };

    const std::size_t m = w.size();
    std::vector<double> sx(m), sy(m);
    for (std::size_t i = 0; i < m; ++i) {
        sx[i] = score(i, paired.x()[i]);
        sy[i] = score(i, paired.y()[i]);
    }
    return ScorePairVector(std::move(sx), std::move(sy));
}

ScorePairVector plis_scores_hmm_naive(const PairedData& paired, const HmmParams& params) {
    const std::size_t m = paired.size();
    std::vector<double> sx(m), sy(m);
    for (std::size_t i = 0; i < m; ++i) {
        sx[i] = forward_backward(substitute(paired, i, Side::test).materialize(), params)[i];
        sy[i] = forward_backward(substitute(paired, i, Side::calibration).materialize(), params)[i];
    }
    return ScorePairVector(std::move(sx), std::move(sy));
}

} // namespace plis
