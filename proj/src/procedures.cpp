#include "plis/procedures.hpp"

#include <cmath>

#include "plis/error.hpp"
#include "plis/multiple_testing.hpp"
#include "plis/rng.hpp"
#include "plis/twogroup.hpp"

namespace plis {

const char* to_string(ModelKind kind) {
    return kind == ModelKind::hmm ? "hmm" : "twogroup";
}

ModelKind parse_model_kind(const std::string& name) {
    if (name == "hmm" || name == "hm") {
        return ModelKind::hmm;
    }
    if (name == "twogroup" || name == "tg" || name == "two_group") {
        return ModelKind::two_group;
    }
    throw Error(ErrorKind::config_error, "unknown working model '" + name + "' (expected hmm or twogroup)");
}

WorkingModelSpec WorkingModelSpec::hmm(Combiner combiner) {
    WorkingModelSpec spec;
    spec.kind = ModelKind::hmm;
    spec.combiner = combiner;
    return spec;
}

WorkingModelSpec WorkingModelSpec::two_group(Combiner combiner) {
    WorkingModelSpec spec;
    spec.kind = ModelKind::two_group;
    spec.combiner = combiner;
    return spec;
}

namespace {

void require_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw Error(ErrorKind::invalid_argument, "alpha must lie in (0, 1)");
    }
}

void require_observations(std::span<const double> x) {
    if (x.empty()) {
        throw Error(ErrorKind::invalid_argument, "no observations");
    }
    require_finite(x, "observations");
}

ScoredData score_hmm(const PairedData& paired, EmConfig config) {
    ScoredData out;
    const auto fit = em_fit(paired.w(), config);
    out.scores = plis_scores_hmm(paired, fit.params);
    out.diagnostics.em = fit.report;
    out.diagnostics.hmm_params = fit.params;
    return out;
}

ScoredData score_density_ratio(const PairedData& paired, const DensityRatio& ratio, const KdeEstimate& f) {
    auto result = density_ratio_scores(paired, ratio);
    ScoredData out;
    out.scores = std::move(result.scores);
    out.diagnostics.n_sentinel = result.n_sentinel;
    out.diagnostics.kde_bandwidth = f.bandwidth();
    out.diagnostics.kde_degenerate = f.degenerate();
    return out;
}

} // namespace

ScoredData score_pairs(const PairedData& paired, const WorkingModelSpec& model) {
    if (model.kind == ModelKind::hmm) {
        EmConfig config = model.em;
        if (model.estimate_null) {
            config.frozen_null.reset();
        }
        return score_hmm(paired, config);
    }
    auto f = kde_fit(paired.w(), model.bandwidth);
    return score_density_ratio(paired, DensityRatio(NullDistribution::normal(), f), f);
}

ProcedureResult decide(ScoredData scored, double alpha) {
    require_alpha(alpha);
    ProcedureResult result;
    result.scores = std::move(scored.scores);
    result.diagnostics = std::move(scored.diagnostics);

    const auto path = mirror_path(result.scores);
    result.tau = select_threshold(path, alpha);
    result.decisions = decisions_at(result.scores, result.tau);
    result.q_values = conformal_q_values(result.scores, path);
    result.e_values = generalized_e_values(result.scores, result.tau, result.scores.size());
    result.diagnostics.n_candidates = result.scores.count(Membership::candidate);
    result.diagnostics.n_calibration = result.scores.count(Membership::calibration);

    bool hold = e_bh(result.e_values, alpha) == result.decisions;
    for (std::size_t i = 0; hold && i < result.decisions.size(); ++i) {
        hold = (result.q_values[i] <= alpha) == (result.decisions[i] != 0);
    }
    result.diagnostics.equivalences_hold = hold;
    return result;
}

std::vector<double> draw_calibration(const NullDistribution& f0, std::size_t m, std::uint64_t seed, std::uint64_t run) {
    Rng rng(seed, run);
    std::vector<double> y(m);
    for (auto& v : y) {
        v = f0.sample(rng);
    }
    return y;
}

std::vector<double> to_z_values(std::span<const double> x, const NullDistribution& f0, std::size_t* n_clamped) {
    std::vector<double> z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto r = z_transform(x[i], f0);
        z[i] = r.z;
        if (n_clamped != nullptr) {
            *n_clamped += r.clamped;
        }
    }
    return z;
}

namespace {

PairedData supervised_pairs(std::span<const double> x, const NullDistribution& f0, const WorkingModelSpec& model,
                            std::uint64_t seed, std::uint64_t run, std::size_t& n_clamped) {
    auto zx = to_z_values(x, f0, &n_clamped);
    auto zy = to_z_values(draw_calibration(f0, x.size(), seed, run), f0, &n_clamped);
    return build_paired(std::move(zx), std::move(zy), model.combiner);
}

} // namespace

ProcedureResult run_plis(std::span<const double> x, const NullDistribution& f0, const WorkingModelSpec& model, double alpha,
                     std::uint64_t seed) {
    require_alpha(alpha);
    require_observations(x);
    std::size_t n_clamped = 0;
    const auto paired = supervised_pairs(x, f0, model, seed, 0, n_clamped);
    auto result = decide(score_pairs(paired, model), alpha);
    result.calibration.assign(paired.y().begin(), paired.y().end());
    result.diagnostics.n_clamped = n_clamped;
    return result;
}

NullSplit split_nulls(std::span<const double> nulls, std::size_t m, std::uint64_t seed) {
    if (nulls.size() < 2 * m) {
        throw Error(ErrorKind::insufficient_nulls,
                    "semi-supervised testing needs at least 2m = " + std::to_string(2 * m) + " null samples but got " +
                        std::to_string(nulls.size()) + "; screen the hypotheses down to at most n/2 first");
    }
    require_finite(nulls, "null samples");
    Rng rng(seed, 0);
    const auto order = rng.permutation(nulls.size());
    NullSplit split;
    split.calibration.reserve(m);
    split.training.reserve(nulls.size() - m);
    for (std::size_t k = 0; k < order.size(); ++k) {
        (k < m ? split.calibration : split.training).push_back(nulls[order[k]]);
    }
    return split;
}

ProcedureResult semi_supervised_plis(std::span<const double> x, std::span<const double> nulls,
                                     const WorkingModelSpec& model, double alpha, std::uint64_t seed) {
    require_alpha(alpha);
    require_observations(x);
    auto split = split_nulls(nulls, x.size(), seed);
    const auto paired = build_paired(std::vector<double>(x.begin(), x.end()), split.calibration, model.combiner);

    ScoredData scored;
    if (model.kind == ModelKind::hmm) {
        double mean = 0.0;
        for (double v : split.training) {
            mean += v;
        }
        mean /= static_cast<double>(split.training.size());
        double ss = 0.0;
        for (double v : split.training) {
            ss += (v - mean) * (v - mean);
        }
        const GaussianEmission null{mean, std::max(std::sqrt(ss / static_cast<double>(split.training.size() - 1)),
                                                   model.em.min_sd)};
        EmConfig config = model.em;
        config.frozen_null = null;
        if (config.init) {
            config.init->null_emission = null;
        }
        scored = score_hmm(paired, config);
    } else {
        auto f0 = kde_fit(split.training, model.bandwidth);
        auto f = kde_fit(paired.w(), model.bandwidth);
        scored = score_density_ratio(paired, DensityRatio(std::move(f0), f), f);
    }
    auto result = decide(std::move(scored), alpha);
    result.calibration = std::move(split.calibration);
    return result;
}

std::vector<ScorePairVector> derandomized_scores(std::span<const double> x, const NullDistribution& f0,
                                                 const WorkingModelSpec& model, std::size_t n_runs,
                                                 std::uint64_t seed) {
    if (n_runs == 0) {
        throw Error(ErrorKind::invalid_argument, "derandomization needs at least one run");
    }
    require_observations(x);
    std::vector<ScorePairVector> runs;
    runs.reserve(n_runs);
    std::size_t n_clamped = 0;
    for (std::size_t k = 0; k < n_runs; ++k) {
        runs.push_back(score_pairs(supervised_pairs(x, f0, model, seed, k, n_clamped), model).scores);
    }
    return runs;
}

ProcedureResult derandomize(std::span<const ScorePairVector> runs, std::span<const double> alphas, double alpha) {
    require_alpha(alpha);
    if (runs.empty() || alphas.size() != runs.size()) {
        throw Error(ErrorKind::length_mismatch, "need one level per run: " + std::to_string(runs.size()) + " runs, " +
                                                    std::to_string(alphas.size()) + " levels");
    }
    const std::size_t m = runs.front().size();
    std::vector<double> average(m, 0.0);
    for (std::size_t k = 0; k < runs.size(); ++k) {
        const auto e = generalized_e_values(runs[k], select_threshold(runs[k], alphas[k]), m);
        for (std::size_t i = 0; i < m; ++i) {
            average[i] += e[i];
        }
    }
    for (auto& v : average) {
        v /= static_cast<double>(runs.size());
    }
    ProcedureResult result;
    result.decisions = e_bh(average, alpha);
    result.e_values = std::move(average);
    result.scores = runs.front();
    return result;
}

ProcedureResult derandomized_plis(std::span<const double> x, const NullDistribution& f0, const WorkingModelSpec& model,
                                  std::size_t n_runs, std::span<const double> alphas, double alpha, std::uint64_t seed) {
    const auto runs = derandomized_scores(x, f0, model, n_runs, seed);
    return derandomize(runs, alphas, alpha);
}

std::vector<double> lis_statistics(std::span<const double> x, const EmConfig& em) {
    const auto fit = em_fit(x, em);
    return forward_backward(x, fit.params);
}

} // namespace plis
