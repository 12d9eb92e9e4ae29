#include "plis/verification.hpp"

#include "plis/rng.hpp"
#include "plis/simgen.hpp"

namespace plis {

namespace {

ScorePairVector score(const std::vector<double>& x, const std::vector<double>& y, const WorkingModelSpec& model) {
    return score_pairs(build_paired(x, y, model.combiner), model).scores;
}

} // namespace

ExchangeabilityReport exchangeability_probe(const WorkingModelSpec& model, std::size_t m, std::size_t trials,
                                            std::uint64_t seed) {
    ExchangeabilityReport report;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        ++report.trials;
        const auto trial_seed = derive_seed(seed, trial);
        auto data = gen_hmm(m, 0.9, 0.7, 2.5, trial_seed);
        Rng rng(trial_seed, 7);
        std::vector<double> y(m);
        for (auto& v : y) {
            v = rng.normal();
        }
        const auto& x = data.x;
        const auto base = score(x, y, model);

        for (std::size_t i = 0; i < m; ++i) {
            auto xs = x;
            auto ys = y;
            std::swap(xs[i], ys[i]);
            const auto swapped = score(xs, ys, model);
            bool ok = swapped.sx(i) == base.sy(i) && swapped.sy(i) == base.sx(i);
            for (std::size_t k = 0; ok && k < m; ++k) {
                ok = k == i || (swapped.sx(k) == base.sx(k) && swapped.sy(k) == base.sy(k));
            }
            report.swap_violations += !ok;
        }

        const std::size_t i = rng.uniform_int(0, static_cast<std::int64_t>(m) - 1);
        std::size_t j = rng.uniform_int(0, static_cast<std::int64_t>(m) - 2);
        j += j >= i;
        auto permuted = x;
        std::swap(permuted[i], permuted[j]);
        const auto moved = score(permuted, y, model);
        for (std::size_t k = 0; k < m; ++k) {
            if (k != i && k != j && (moved.sx(k) != base.sx(k) || moved.sy(k) != base.sy(k))) {
                ++report.joint_changes;
                break;
            }
        }

        auto tied = x;
        tied[j] = tied[i];
        const auto tied_base = score(tied, y, model);
        auto tied_swapped = tied;
        std::swap(tied_swapped[i], tied_swapped[j]);
        const auto tied_moved = score(tied_swapped, y, model);
        for (std::size_t k = 0; k < m; ++k) {
            if (tied_moved.sx(k) != tied_base.sx(k) || tied_moved.sy(k) != tied_base.sy(k)) {
                ++report.degenerate_changes;
                break;
            }
        }
    }
    return report;
}

} // namespace plis
