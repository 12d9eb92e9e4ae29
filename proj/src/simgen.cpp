#include "plis/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "plis/config.hpp"
#include "plis/error.hpp"
#include "plis/rng.hpp"

namespace plis {

namespace {

void require_probability(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw Error(ErrorKind::config_error, std::string(name) + " must lie in [0, 1], got " + format_double(p));
    }
}

void require_length(std::size_t m) {
    if (m == 0) {
        throw Error(ErrorKind::config_error, "sequence length m must be at least 1");
    }
}

/// Emissions N(0, 1) for nulls and N(mu, 1) for signals, drawn after the states.
void emit(LabeledDataset& data, double mu, Rng& rng) {
    data.x.resize(data.truth.size());
    for (std::size_t i = 0; i < data.truth.size(); ++i) {
        data.x[i] = rng.normal() + (data.truth[i] ? mu : 0.0);
    }
}

template <typename A11>
LabeledDataset markov_chain(std::size_t m, double a00, A11 a11_at, double mu, std::uint64_t seed) {
    require_length(m);
    require_probability(a00, "a00");
    Rng rng(seed, 0);
    LabeledDataset data;
    data.truth.assign(m, 0);
    for (std::size_t k = 1; k < m; ++k) {
        const double stay = data.truth[k - 1] ? a11_at(k + 1) : a00;
        const bool same = rng.uniform() < stay;
        data.truth[k] = same ? data.truth[k - 1] : !data.truth[k - 1];
    }
    emit(data, mu, rng);
    return data;
}

bool in_windows(std::size_t s, std::initializer_list<std::pair<std::size_t, std::size_t>> windows) {
    for (const auto& [lo, hi] : windows) {
        if (s >= lo && s <= hi) {
            return true;
        }
    }
    return false;
}

} // namespace

double hetero_a11(Schedule schedule, std::size_t k) {
    const double kk = static_cast<double>(k);
    return schedule == Schedule::exp_decay ? 0.9 * std::exp(-kk / 1000.0) : 0.4 * (1.0 + std::sin(kk / 100.0));
}

LabeledDataset gen_hmm(std::size_t m, double a00, double a11, double mu, std::uint64_t seed) {
    require_probability(a11, "a11");
    return markov_chain(m, a00, [a11](std::size_t) { return a11; }, mu, seed);
}

LabeledDataset gen_hetero_hmm(std::size_t m, Schedule schedule, double mu, std::uint64_t seed, double a00) {
    return markov_chain(m, a00, [schedule](std::size_t k) { return hetero_a11(schedule, k); }, mu, seed);
}

TruthVector two_layer_states(std::size_t m, double c, std::span<const double> innovations) {
    if (innovations.size() != m) {
        throw Error(ErrorKind::length_mismatch, "need one innovation per position");
    }
    TruthVector truth(m, 0);
    double z1 = 0.0, z2 = 0.0, e1 = 0.0;
    for (std::size_t t = 0; t < m; ++t) {
        const double z = c + z1 - 0.5 * z2 + innovations[t] + 0.1 * e1;
        truth[t] = z < 0.0;
        z2 = z1;
        z1 = z;
        e1 = innovations[t];
    }
    return truth;
}

LabeledDataset gen_two_layer(std::size_t m, double c, double mu, std::uint64_t seed, double innovation_sd) {
    require_length(m);
    if (!(c >= 0.0)) {
        throw Error(ErrorKind::config_error, "two-layer drift c must be non-negative");
    }
    Rng rng(seed, 0);
    std::vector<double> innovations(m);
    for (auto& e : innovations) {
        e = rng.normal(0.0, innovation_sd);
    }
    LabeledDataset data;
    data.truth = two_layer_states(m, c, innovations);
    emit(data, mu, rng);
    return data;
}

LabeledDataset gen_renewal(std::size_t m, double lambda, double mu, std::uint64_t seed) {
    require_length(m);
    if (!(lambda > 0.0)) {
        throw Error(ErrorKind::config_error, "renewal rate lambda must be positive");
    }
    Rng rng(seed, 0);
    LabeledDataset data;
    data.truth.reserve(m);
    for (std::size_t block = 1; data.truth.size() < m; ++block) {
        const bool signal = block % 2 == 0;
        const auto gap = signal ? 1 + rng.poisson(lambda) : rng.uniform_int(2, 20);
        for (std::int64_t j = 0; j < gap && data.truth.size() < m; ++j) {
            data.truth.push_back(signal);
        }
    }
    emit(data, mu, rng);
    return data;
}

double covariate_pi(int scenario, std::size_t s, double pi_base) {
    if (scenario == 1) {
        if (in_windows(s, {{201, 500}, {801, 1100}, {1501, 1800}, {2101, 2400}})) {
            return 0.4 * (1.0 + std::sin(0.2 * static_cast<double>(s)));
        }
        return 0.02;
    }
    if (scenario == 2) {
        if (in_windows(s, {{201, 350}, {1501, 1650}})) {
            return 2.0 * pi_base;
        }
        if (in_windows(s, {{801, 1000}, {2101, 2300}})) {
            return pi_base;
        }
        return 0.02;
    }
    throw Error(ErrorKind::config_error, "covariate scenario must be 1 or 2");
}

LabeledDataset gen_covariate(std::size_t m, int scenario, double mu, std::uint64_t seed,
                             std::optional<double> pi_base) {
    require_length(m);
    if (scenario == 2) {
        if (!pi_base) {
            throw Error(ErrorKind::config_error, "covariate scenario 2 needs pi_base");
        }
        require_probability(2.0 * *pi_base, "2 * pi_base");
    }
    Rng rng(seed, 0);
    LabeledDataset data;
    data.truth.resize(m);
    data.x.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t s = i + 1;
        data.truth[i] = rng.bernoulli(covariate_pi(scenario, s, pi_base.value_or(0.0)));
    }
    for (std::size_t i = 0; i < m; ++i) {
        const double s = static_cast<double>(i + 1);
        const double signal_mean = scenario == 1 ? mu + 0.2 * std::sin(0.6 * s) : mu;
        data.x[i] = rng.normal() + (data.truth[i] ? signal_mean : 0.0);
    }
    return data;
}

LabeledDataset gen_iid_two_group(std::size_t m, double pi, double mu, std::uint64_t seed) {
    require_length(m);
    require_probability(pi, "pi");
    Rng rng(seed, 0);
    LabeledDataset data;
    data.truth.resize(m);
    for (auto& t : data.truth) {
        t = rng.bernoulli(pi);
    }
    emit(data, mu, rng);
    return data;
}

std::vector<double> correlated_component(std::size_t n, const NoiseSpec& noise, std::uint64_t seed) {
    const double half = std::sqrt(0.5);
    Rng rng(seed, 1);
    std::vector<double> e(n);
    switch (noise.kind) {
    case NoiseKind::iid:
        for (auto& v : e) {
            v = half * rng.normal();
        }
        break;
    case NoiseKind::equicorrelated: {
        if (!(noise.rho >= 0.0 && noise.rho < 1.0)) {
            throw Error(ErrorKind::config_error, "equicorrelated noise needs rho in [0, 1)");
        }
        const double shared = std::sqrt(noise.rho) * rng.normal();
        const double own = std::sqrt(1.0 - noise.rho);
        for (auto& v : e) {
            v = half * (shared + own * rng.normal());
        }
        break;
    }
    case NoiseKind::ar1: {
        if (!(std::fabs(noise.rho) < 1.0)) {
            throw Error(ErrorKind::config_error, "AR(1) noise needs |rho| < 1");
        }
        const double innovation = half * std::sqrt(1.0 - noise.rho * noise.rho);
        for (std::size_t t = 0; t < n; ++t) {
            e[t] = t == 0 ? half * rng.normal() : noise.rho * e[t - 1] + innovation * rng.normal();
        }
        break;
    }
    }
    return e;
}

LabeledDataset apply_noise(const TruthVector& truth, double mu, const NoiseSpec& noise, std::size_t n_nulls,
                           std::uint64_t seed) {
    const std::size_t m = truth.size();
    const std::size_t n = m + n_nulls;
    const auto e2 = correlated_component(n, noise, seed);
    Rng rng(seed, 2);
    const double half = std::sqrt(0.5);
    LabeledDataset data;
    data.truth = truth;
    data.x.resize(m);
    data.nulls.resize(n_nulls);
    for (std::size_t i = 0; i < n; ++i) {
        const double value = half * rng.normal() + e2[i];
        if (i < m) {
            data.x[i] = (truth[i] ? mu : 0.0) + value;
        } else {
            data.nulls[i - m] = value;
        }
    }
    return data;
}

NoiseKind parse_noise_kind(const std::string& name) {
    if (name == "iid") {
        return NoiseKind::iid;
    }
    if (name == "equicorrelated" || name == "equi") {
        return NoiseKind::equicorrelated;
    }
    if (name == "ar1") {
        return NoiseKind::ar1;
    }
    throw Error(ErrorKind::config_error, "unknown noise '" + name + "' (expected iid, equicorrelated or ar1)");
}

const char* to_string(NoiseKind kind) {
    switch (kind) {
    case NoiseKind::iid:
        return "iid";
    case NoiseKind::equicorrelated:
        return "equicorrelated";
    case NoiseKind::ar1:
        return "ar1";
    }
    return "?";
}

void GeneratorConfig::validate() const {
    static const char* kinds[] = {"hmm", "hetero_exp", "hetero_periodic", "two_layer", "renewal", "covariate", "iid_two_group"};
    if (std::find(std::begin(kinds), std::end(kinds), kind) == std::end(kinds)) {
        throw Error(ErrorKind::config_error, "unknown generator '" + kind + "'");
    }
    require_length(m);
    require_probability(a00, "a00");
    require_probability(a11, "a11");
    require_probability(pi, "pi");
    if (!std::isfinite(mu)) {
        throw Error(ErrorKind::config_error, "mu must be finite");
    }
    if (kind == "covariate" && scenario != 1 && scenario != 2) {
        throw Error(ErrorKind::config_error, "covariate scenario must be 1 or 2");
    }
    if (kind == "covariate" && scenario == 2 && !pi_base) {
        throw Error(ErrorKind::config_error, "covariate scenario 2 needs pi_base");
    }
    if (kind == "renewal" && !(lambda > 0.0)) {
        throw Error(ErrorKind::config_error, "renewal rate lambda must be positive");
    }
    if (kind == "two_layer" && !(c >= 0.0)) {
        throw Error(ErrorKind::config_error, "two-layer drift c must be non-negative");
    }
    if (noise.kind == NoiseKind::equicorrelated && !(noise.rho >= 0.0 && noise.rho < 1.0)) {
        throw Error(ErrorKind::config_error, "equicorrelated noise needs rho in [0, 1)");
    }
    if (noise.kind == NoiseKind::ar1 && !(std::fabs(noise.rho) < 1.0)) {
        throw Error(ErrorKind::config_error, "AR(1) noise needs |rho| < 1");
    }
}

LabeledDataset generate(const GeneratorConfig& config, std::uint64_t seed) {
    config.validate();
    LabeledDataset data;
    if (config.kind == "hmm") {
        data = gen_hmm(config.m, config.a00, config.a11, config.mu, seed);
    } else if (config.kind == "hetero_exp") {
        data = gen_hetero_hmm(config.m, Schedule::exp_decay, config.mu, seed, config.a00);
    } else if (config.kind == "hetero_periodic") {
        data = gen_hetero_hmm(config.m, Schedule::periodic, config.mu, seed, config.a00);
    } else if (config.kind == "two_layer") {
        data = gen_two_layer(config.m, config.c, config.mu, seed, config.innovation_sd);
    } else if (config.kind == "renewal") {
        data = gen_renewal(config.m, config.lambda, config.mu, seed);
    } else if (config.kind == "covariate") {
        data = gen_covariate(config.m, config.scenario, config.mu, seed, config.pi_base);
    } else {
        data = gen_iid_two_group(config.m, config.pi, config.mu, seed);
    }

    if (config.noise.kind != NoiseKind::iid) {
        return apply_noise(data.truth, config.mu, config.noise, config.n_nulls, seed);
    }
    if (config.n_nulls > 0) {
        Rng rng(seed, 2);
        data.nulls.resize(config.n_nulls);
        for (auto& v : data.nulls) {
            v = rng.normal();
        }
    }
    return data;
}

void write_dataset(std::ostream& out, const LabeledDataset& data) {
    out << "index,x,theta\n";
    for (std::size_t i = 0; i < data.x.size(); ++i) {
        out << i + 1 << ',' << format_double(data.x[i]) << ',' << int(data.truth[i]) << '\n';
    }
}

} // namespace plis
