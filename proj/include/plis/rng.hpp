#ifndef PLIS_RNG_HPP
#define PLIS_RNG_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

namespace plis {

/**
 * Philox4x32-10 counter-based generator.
 *
 * A generator is identified by a 64-bit key and a 64-bit stream id; the remaining 64 counter
 * bits index blocks within the stream. Distinct (key, stream) pairs give independent sequences,
 * so every replication of an experiment can own a stream derived from its coordinates without
 * any shared state between workers.
 *
 * All samplers are implemented here rather than through `<random>` distributions, whose
 * algorithms differ between standard libraries; outputs are reproducible across platforms.
 */
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t key, std::uint64_t stream = 0);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()() { return next_u64(); }

    std::uint64_t next_u64();

    /// Uniform on the open interval (0, 1).
    double uniform();

    /// Uniform on the closed integer range [lo, hi].
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

    double normal();
    double normal(double mean, double sd) { return mean + sd * normal(); }

    std::int64_t poisson(double lambda);

    bool bernoulli(double p) { return uniform() < p; }

    /// Uniformly random permutation of 0..n-1 (Fisher-Yates).
    std::vector<std::size_t> permutation(std::size_t n);

private:
    void refill();

    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int buffered_ = 0;
    bool has_spare_normal_ = false;
    double spare_normal_ = 0.0;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Hierarchical seed derivation: derive_seed(base, a, b) differs for every (a, b).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a);
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b);

/// FNV-1a hash of a string, for turning names into seed coordinates.
std::uint64_t hash_name(const char* name);

} // namespace plis

#endif // PLIS_RNG_HPP
