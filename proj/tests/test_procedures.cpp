#include <catch_amalgamated.hpp>

#include <cmath>

#include "plis/error.hpp"
#include "plis/multiple_testing.hpp"
#include "plis/procedures.hpp"
#include "plis/rng.hpp"
#include "plis/simgen.hpp"

using namespace plis;

namespace {

std::vector<double> null_sample(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> v(n);
    for (auto& x : v) {
        x = rng.normal();
    }
    return v;
}

struct MeanSe {
    double mean;
    double se;
};

MeanSe mean_se(const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) {
        mean += x;
    }
    mean /= double(v.size());
    double ss = 0.0;
    for (double x : v) {
        ss += (x - mean) * (x - mean);
    }
    return {mean, std::sqrt(ss / double(v.size() - 1) / double(v.size()))};
}

} // namespace

TEST_CASE("supervised PLIS on HMM data", "[procedures]") {
    const auto data = gen_hmm(2000, 0.95, 0.8, 2.6, 60);
    for (const auto& model : {WorkingModelSpec::hmm(), WorkingModelSpec::two_group()}) {
        const auto r = run_plis(data.x, NullDistribution::normal(), model, 0.05, 61);
        CHECK(r.diagnostics.equivalences_hold);
        CHECK(r.n_rejected() > 50);
        CHECK(compute_fdp_tdp(r.decisions, data.truth).fdp < 0.15);
        CHECK(r.calibration.size() == 2000);
        CHECK(r.q_values.size() == 2000);
        const auto again = run_plis(data.x, NullDistribution::normal(), model, 0.05, 61);
        CHECK(again.decisions == r.decisions);
        CHECK(again.e_values == r.e_values);
    }
}

TEST_CASE("a level below 1/m rejects nothing", "[procedures]") {
    const auto data = gen_hmm(500, 0.95, 0.8, 4.0, 62);
    const auto r = run_plis(data.x, NullDistribution::normal(), WorkingModelSpec::hmm(), 1.0 / 600.0, 63);
    CHECK(r.n_rejected() == 0);
    CHECK(r.tau == no_threshold);
}

TEST_CASE("global null: mean false discovery proportion stays below alpha", "[procedures][montecarlo]") {
    for (const auto& model : {WorkingModelSpec::hmm(), WorkingModelSpec::two_group()}) {
        std::vector<double> fdp;
        for (int rep = 0; rep < 200; ++rep) {
            const auto x = null_sample(300, 1000 + rep);
            const auto r = run_plis(x, NullDistribution::normal(), model, 0.1, 5000 + rep);
            fdp.push_back(r.n_rejected() > 0 ? 1.0 : 0.0);
        }
        const auto s = mean_se(fdp);
        CHECK(s.mean <= 0.1 + 2.0 * s.se);
    }
}

TEST_CASE("non-normal known nulls go through the z-transform", "[procedures]") {
    Rng rng(64);
    std::vector<double> x(400);
    for (std::size_t i = 0; i < 400; ++i) {
        x[i] = i >= 100 && i < 140 ? rng.uniform() * 1e-4 : rng.uniform();
    }
    std::size_t clamped = 0;
    const auto z = to_z_values(x, NullDistribution::uniform(0, 1), &clamped);
    CHECK(clamped == 0);
    CHECK(z[0] == Catch::Approx(normal_quantile(x[0])).epsilon(1e-12));
    const auto r = run_plis(x, NullDistribution::uniform(0, 1), WorkingModelSpec::hmm(), 0.1, 65);
    CHECK(r.diagnostics.equivalences_hold);
}

TEST_CASE("calibration draws depend on the seed and run only", "[procedures]") {
    const auto a = draw_calibration(NullDistribution::normal(), 50, 7, 0);
    CHECK(a == draw_calibration(NullDistribution::normal(), 50, 7, 0));
    CHECK(a != draw_calibration(NullDistribution::normal(), 50, 7, 1));
    CHECK(a != draw_calibration(NullDistribution::normal(), 50, 8, 0));
}

TEST_CASE("null split uses the first m entries of a seeded permutation", "[procedures]") {
    std::vector<double> nulls(10);
    for (std::size_t i = 0; i < 10; ++i) {
        nulls[i] = double(i);
    }
    const auto split = split_nulls(nulls, 4, 9);
    const auto perm = Rng(9, 0).permutation(10);
    REQUIRE(split.calibration.size() == 4);
    REQUIRE(split.training.size() == 6);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(split.calibration[k] == double(perm[k]));
    }
    for (std::size_t k = 0; k < 6; ++k) {
        CHECK(split.training[k] == double(perm[4 + k]));
    }
    try {
        split_nulls(nulls, 6, 9);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::insufficient_nulls);
    }
}

TEST_CASE("semi-supervised PLIS", "[procedures]") {
    GeneratorConfig g;
    g.noise = {NoiseKind::equicorrelated, 0.4};
    g.n_nulls = 4000;
    const auto data = generate(g, 66);
    for (const auto& model : {WorkingModelSpec::hmm(), WorkingModelSpec::two_group()}) {
        const auto r = semi_supervised_plis(data.x, data.nulls, model, 0.05, 67);
        CHECK(r.diagnostics.equivalences_hold);
        CHECK(r.n_rejected() > 0);
        CHECK(r.decisions == semi_supervised_plis(data.x, data.nulls, model, 0.05, 67).decisions);
    }
    CHECK_THROWS_AS(semi_supervised_plis(data.x, std::vector<double>(3999, 0.0), WorkingModelSpec::hmm(), 0.05, 1),
                    Error);
}

TEST_CASE("semi-supervised global null", "[procedures][montecarlo]") {
    std::vector<double> fdp;
    for (int rep = 0; rep < 200; ++rep) {
        const auto x = null_sample(200, 3000 + rep);
        const auto u = null_sample(400, 4000 + rep);
        const auto r = semi_supervised_plis(x, u, WorkingModelSpec::hmm(), 0.1, rep);
        fdp.push_back(r.n_rejected() > 0 ? 1.0 : 0.0);
    }
    const auto s = mean_se(fdp);
    CHECK(s.mean <= 0.1 + 2.0 * s.se);
}

TEST_CASE("derandomization with one run is e-BH on a single run", "[procedures]") {
    const auto data = gen_iid_two_group(1000, 0.2, 3.0, 68);
    const auto model = WorkingModelSpec::two_group();
    const auto runs = derandomized_scores(data.x, NullDistribution::normal(), model, 1, 69);
    const auto single = run_plis(data.x, NullDistribution::normal(), model, 0.025, 69);
    CHECK(runs.front().sx().size() == single.scores.size());
    const auto d = derandomize(runs, std::vector<double>{0.025}, 0.05);
    CHECK(d.decisions == e_bh(single.e_values, 0.05));
    const auto direct = derandomized_plis(data.x, NullDistribution::normal(), model, 1, std::vector<double>{0.025},
                                          0.05, 69);
    CHECK(direct.decisions == d.decisions);
    CHECK_THROWS_AS(derandomize(runs, std::vector<double>{0.02, 0.03}, 0.05), Error);
}

TEST_CASE("averaged e-values with an inflated per-run level make almost no discoveries", "[procedures]") {
    const auto data = gen_iid_two_group(2000, 0.2, 3.0, 70);
    const auto runs = derandomized_scores(data.x, NullDistribution::normal(), WorkingModelSpec::two_group(), 10, 71);
    CHECK(derandomize(runs, std::vector<double>(10, 0.06), 0.05).n_rejected() <= 1);
    CHECK(derandomize(runs, std::vector<double>(10, 0.025), 0.05).n_rejected() > 0);
}

TEST_CASE("decide checks the equivalences on given scores", "[procedures]") {
    ScoredData scored{ScorePairVector({0.1, 0.2, 0.7, 0.05}, {0.9, 0.8, 0.3, 0.95}), {}};
    const auto r = decide(scored, 0.4);
    CHECK(r.tau == 0.2);
    CHECK(r.decisions == DecisionVector{1, 1, 0, 1});
    CHECK(r.e_values == std::vector<double>{4, 4, 0, 4});
    CHECK(r.diagnostics.equivalences_hold);
    CHECK(r.diagnostics.n_candidates == 3);
    CHECK(r.diagnostics.n_calibration == 1);
}

TEST_CASE("LIS statistics come from an HMM fitted on the data", "[procedures]") {
    const auto data = gen_hmm(1000, 0.95, 0.8, 3.0, 72);
    const auto lis = lis_statistics(data.x);
    REQUIRE(lis.size() == 1000);
    const auto d = lis_rule(lis, 0.05);
    CHECK(compute_fdp_tdp(d, data.truth).tdp > 0.5);
}

TEST_CASE("model names and bad inputs", "[procedures]") {
    CHECK(parse_model_kind("hmm") == ModelKind::hmm);
    CHECK(parse_model_kind(to_string(ModelKind::two_group)) == ModelKind::two_group);
    CHECK_THROWS_AS(parse_model_kind("ising"), Error);
    CHECK_THROWS_AS(run_plis(std::vector<double>{1.0, NAN, 2.0}, NullDistribution::normal(), WorkingModelSpec::hmm(),
                             0.05, 1),
                    Error);
    CHECK_THROWS_AS(run_plis(std::vector<double>{1.0, 2.0}, NullDistribution::normal(), WorkingModelSpec::hmm(), 1.5, 1),
                    Error);
}
