#ifndef PLIS_SIMGEN_HPP
#define PLIS_SIMGEN_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "plis/core.hpp"

/**
 * @file simgen.hpp
 *
 * @brief Seeded generators for structured simulation designs.
 *
 * Every generator is a pure function of its configuration and seed. Positions are 1-based in
 * the formulas below (k, s) and 0-based in the returned vectors.
 */

namespace plis {

struct LabeledDataset {
    std::vector<double> x;
    TruthVector truth;
    /// Null samples for semi-supervised runs; empty unless requested.
    std::vector<double> nulls;
};

enum class Schedule { exp_decay, periodic };

/// a11 for the k-th transition: 0.9 exp(-k / 1000) or 0.4 (1 + sin(k / 100)).
double hetero_a11(Schedule schedule, std::size_t k);

/// Markov chain with theta_1 = 0 and emissions N(0, 1) / N(mu, 1).
LabeledDataset gen_hmm(std::size_t m, double a00, double a11, double mu, std::uint64_t seed);

/// Time-varying chain: a00 fixed, a11 from the schedule; transition k leads into position k.
LabeledDataset gen_hetero_hmm(std::size_t m, Schedule schedule, double mu, std::uint64_t seed, double a00 = 0.95);

/**
 * Latent ARMA process Z_t = c + Z_{t-1} - 0.5 Z_{t-2} + e_t + 0.1 e_{t-1} with e_t ~ N(0, sd^2),
 * started from Z_0 = Z_{-1} = 0 and e_0 = 0 without burn-in; theta_t = 1{Z_t < 0}.
 */
LabeledDataset gen_two_layer(std::size_t m, double c, double mu, std::uint64_t seed, double innovation_sd = 0.5);

/// States of the ARMA design only; `innovations` overrides the random draws when given.
TruthVector two_layer_states(std::size_t m, double c, std::span<const double> innovations);

/**
 * Alternating blocks: odd gaps Unif{2, ..., 20} are null, even gaps 1 + Poisson(lambda) are
 * non-null. The sequence starts with a null block and is truncated at m.
 */
LabeledDataset gen_renewal(std::size_t m, double lambda, double mu, std::uint64_t seed);

/**
 * Covariate-modulated independent design with S_i = i.
 * Scenario 1: pi_s = 0.4 (1 + sin(0.2 s)) on [201,500], [801,1100], [1501,1800], [2101,2400],
 * else 0.02; non-null law N(mu + 0.2 sin(0.6 s), 1).
 * Scenario 2: pi_s = 2 pi_base on [201,350], [1501,1650]; pi_base on [801,1000], [2101,2300];
 * else 0.02; non-null law N(mu, 1).
 */
double covariate_pi(int scenario, std::size_t s, double pi_base = 0.0);
LabeledDataset gen_covariate(std::size_t m, int scenario, double mu, std::uint64_t seed,
                             std::optional<double> pi_base = std::nullopt);

/// Independent states with P(theta = 1) = pi and emissions N(0, 1) / N(mu, 1).
LabeledDataset gen_iid_two_group(std::size_t m, double pi, double mu, std::uint64_t seed);

enum class NoiseKind { iid, equicorrelated, ar1 };

struct NoiseSpec {
    NoiseKind kind = NoiseKind::iid;
    double rho = 0.0;
};

/**
 * Noise e_1 + e_2 with e_1 iid N(0, 1/2) and e_2 marginally N(0, 1/2), correlated across all
 * m + n_nulls positions (equal correlation rho, or rho^|i-j|). Returns x_i = theta_i mu + noise_i
 * for the first m positions and nulls_i = noise_{m+i}.
 */
LabeledDataset apply_noise(const TruthVector& truth, double mu, const NoiseSpec& noise, std::size_t n_nulls,
                           std::uint64_t seed);

/// The correlated component e_2 alone, for moment checks.
std::vector<double> correlated_component(std::size_t n, const NoiseSpec& noise, std::uint64_t seed);

/**
 * Named generator with its parameters, as used by simulation plans.
 * Kinds: hmm, hetero_exp, hetero_periodic, two_layer, renewal, covariate, iid_two_group.
 */
struct GeneratorConfig {
    std::string kind = "hmm";
    std::size_t m = 2000;
    double mu = 2.6;
    double a00 = 0.95;
    double a11 = 0.8;
    double c = 0.3;
    double innovation_sd = 0.5;
    double lambda = 2.0;
    int scenario = 1;
    std::optional<double> pi_base;
    double pi = 0.2;
    NoiseSpec noise;
    /// Size of the null pool; 0 means none.
    std::size_t n_nulls = 0;

    /// Throws `config_error` for unknown kinds or out-of-range parameters.
    void validate() const;
};

/// Generates the dataset; nulls are drawn iid N(0, 1) when noise is iid and n_nulls > 0.
LabeledDataset generate(const GeneratorConfig& config, std::uint64_t seed);

/// Delimited export with header `index,x,theta`.
void write_dataset(std::ostream& out, const LabeledDataset& data);

NoiseKind parse_noise_kind(const std::string& name);
const char* to_string(NoiseKind kind);

} // namespace plis

#endif // PLIS_SIMGEN_HPP
