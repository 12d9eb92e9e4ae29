#include <catch_amalgamated.hpp>

#include <cmath>

#include "plis/mirror.hpp"
#include "plis/multiple_testing.hpp"
#include "plis/rng.hpp"
#include "plis/verification.hpp"

using namespace plis;
using Catch::Matchers::WithinAbs;

namespace {

ScorePairVector fixture_f() {
    return ScorePairVector({0.1, 0.2, 0.7, 0.05}, {0.9, 0.8, 0.3, 0.95});
}

ScorePairVector random_instance(Rng& rng, std::size_t m, bool coarse) {
    std::vector<double> sx(m), sy(m);
    for (std::size_t i = 0; i < m; ++i) {
        sx[i] = rng.uniform() * (rng.bernoulli(0.4) ? 0.3 : 1.0);
        sy[i] = rng.uniform();
        if (coarse) {
            sx[i] = std::round(sx[i] * 10) / 10;
            sy[i] = std::round(sy[i] * 10) / 10;
        }
    }
    return ScorePairVector(std::move(sx), std::move(sy));
}

std::vector<double> vec(std::span<const double> s) {
    return {s.begin(), s.end()};
}

} // namespace

TEST_CASE("membership follows the strict inequalities", "[mirror]") {
    const ScorePairVector s({0.1, 0.5, 0.3}, {0.2, 0.4, 0.3});
    CHECK(s.membership(0) == Membership::candidate);
    CHECK(s.membership(1) == Membership::calibration);
    CHECK(s.membership(2) == Membership::tie);
    CHECK(s.count(Membership::candidate) == 1);
    CHECK(s.count(Membership::tie) == 1);
}

TEST_CASE("mirror process on the fixture", "[mirror]") {
    const auto f = fixture_f();
    CHECK_THAT(mirror_q(0.2, f), WithinAbs(1.0 / 3.0, 1e-15));
    CHECK_THAT(mirror_q(0.3, f), WithinAbs(2.0 / 3.0, 1e-15));
    CHECK(mirror_q(0.01, f) == 1.0);
}

TEST_CASE("threshold on the fixture", "[mirror]") {
    const auto f = fixture_f();
    CHECK(select_threshold(f, 0.4) == 0.2);
    CHECK(select_threshold(f, 0.2) == no_threshold);
    const auto d = mirror_decide(f, 0.4);
    CHECK(d.decisions == DecisionVector{1, 1, 0, 1});
    CHECK(d.n_candidates == 3);
    CHECK(d.n_calibration == 1);
    CHECK(d.n_rejected == 3);
    CHECK(d.mirror_count_at_tau == 0);
    CHECK(count_ones(mirror_decide(f, 0.2).decisions) == 0);
}

TEST_CASE("q-values and e-values on the fixture", "[mirror]") {
    const auto f = fixture_f();
    const auto q = conformal_q_values(f);
    CHECK_THAT(q[0], WithinAbs(1.0 / 3.0, 1e-15));
    CHECK_THAT(q[1], WithinAbs(1.0 / 3.0, 1e-15));
    CHECK(q[2] == 1.0);
    CHECK_THAT(q[3], WithinAbs(1.0 / 3.0, 1e-15));
    CHECK(generalized_e_values(f, 0.2, 4) == std::vector<double>{4, 4, 0, 4});
    CHECK(generalized_e_values(f, no_threshold, 4) == std::vector<double>{0, 0, 0, 0});
    const ScorePairVector tie({0.3}, {0.3});
    CHECK(conformal_q_values(tie)[0] == 1.0);
}

TEST_CASE("threshold sweep agrees with the fresh-count oracle", "[mirror][oracle]") {
    Rng rng(10);
    for (int k = 0; k < 300; ++k) {
        const auto s = random_instance(rng, static_cast<std::size_t>(rng.uniform_int(1, 80)), k % 2 == 0);
        const double alpha = rng.uniform();
        REQUIRE(select_threshold(s, alpha) == oracle::threshold(vec(s.sx()), vec(s.sy()), alpha));
        REQUIRE(mirror_decide(s, alpha).decisions == oracle::mirror_rejections(vec(s.sx()), vec(s.sy()), alpha));
    }
}

TEST_CASE("searching only the pairwise minima gives the same rejections", "[mirror][property]") {
    Rng rng(11);
    for (int k = 0; k < 100; ++k) {
        const auto s = random_instance(rng, 40, k % 2 == 0);
        for (double alpha : {0.05, 0.2, 0.5, 0.8}) {
            double best = no_threshold;
            for (std::size_t i = 0; i < s.size(); ++i) {
                const double t = std::min(s.sx(i), s.sy(i));
                if (t > best && mirror_q(t, s) <= alpha) {
                    best = t;
                }
            }
            REQUIRE(decisions_at(s, best) == mirror_decide(s, alpha).decisions);
        }
    }
}

TEST_CASE("decisions agree with q-value thresholding and e-BH", "[mirror][property]") {
    Rng rng(12);
    for (int k = 0; k < 150; ++k) {
        const auto s = random_instance(rng, static_cast<std::size_t>(rng.uniform_int(1, 60)), k % 3 == 0);
        const auto q = conformal_q_values(s);
        for (int a = 1; a <= 99; ++a) {
            const double alpha = a / 100.0;
            const auto d = mirror_decide(s, alpha);
            DecisionVector by_q(s.size());
            for (std::size_t i = 0; i < s.size(); ++i) {
                by_q[i] = q[i] <= alpha;
            }
            REQUIRE(by_q == d.decisions);
            REQUIRE(e_bh(generalized_e_values(s, d.tau, s.size()), alpha) == d.decisions);
            if (d.tau != no_threshold) {
                REQUIRE(mirror_q(d.tau, s) <= alpha);
            }
            for (std::size_t i = 0; i < s.size(); ++i) {
                if (d.decisions[i]) {
                    REQUIRE(s.membership(i) == Membership::candidate);
                    REQUIRE(s.sx(i) <= d.tau);
                }
            }
        }
    }
}

TEST_CASE("rejection sets grow with alpha", "[mirror][property]") {
    Rng rng(13);
    for (int k = 0; k < 100; ++k) {
        const auto s = random_instance(rng, 50, k % 2 == 0);
        DecisionVector previous(s.size(), 0);
        for (int a = 1; a <= 99; ++a) {
            const auto d = mirror_decide(s, a / 100.0).decisions;
            for (std::size_t i = 0; i < s.size(); ++i) {
                REQUIRE(d[i] >= previous[i]);
            }
            previous = d;
        }
    }
}

TEST_CASE("an increasing transform of all scores keeps the rejections", "[mirror][property]") {
    Rng rng(14);
    for (int k = 0; k < 100; ++k) {
        const auto s = random_instance(rng, 50, k % 2 == 0);
        std::vector<double> tx(s.size()), ty(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            tx[i] = std::exp(3.0 * s.sx(i)) - 7.0;
            ty[i] = std::exp(3.0 * s.sy(i)) - 7.0;
        }
        const ScorePairVector t(tx, ty);
        for (double alpha : {0.1, 0.3, 0.6}) {
            REQUIRE(mirror_decide(s, alpha).decisions == mirror_decide(t, alpha).decisions);
        }
    }
}

TEST_CASE("Selective SeqStep+ on anti-symmetric statistics reproduces the rejections", "[mirror][property]") {
    Rng rng(15);
    for (int k = 0; k < 100; ++k) {
        const auto s = random_instance(rng, static_cast<std::size_t>(rng.uniform_int(1, 60)), k % 2 == 0);
        const auto t = antisymmetric_statistics(s);
        for (double alpha : {0.05, 0.1, 0.25, 0.5, 0.9}) {
            REQUIRE(knockoff_plus(t, alpha) == mirror_decide(s, alpha).decisions);
        }
    }
}

TEST_CASE("mirror path counts", "[mirror]") {
    const auto path = mirror_path(fixture_f());
    REQUIRE(path.grid.size() == path.q.size());
    REQUIRE(std::is_sorted(path.grid.begin(), path.grid.end()));
    for (std::size_t k = 0; k < path.grid.size(); ++k) {
        REQUIRE(path.q[k] == mirror_q(path.grid[k], fixture_f()));
    }
}
