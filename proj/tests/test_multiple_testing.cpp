#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "plis/mirror.hpp"
#include "plis/multiple_testing.hpp"
#include "plis/rng.hpp"

using namespace plis;
using Catch::Matchers::WithinAbs;

namespace {

ScorePairVector fixture_f() {
    return ScorePairVector({0.1, 0.2, 0.7, 0.05}, {0.9, 0.8, 0.3, 0.95});
}

/// Step-up BH written from the definition, O(m^2).
DecisionVector bh_oracle(const std::vector<double>& p, double alpha) {
    const std::size_t m = p.size();
    std::size_t k_hat = 0;
    for (std::size_t k = 1; k <= m; ++k) {
        std::vector<double> sorted = p;
        std::sort(sorted.begin(), sorted.end());
        if (sorted[k - 1] <= static_cast<double>(k) * alpha / static_cast<double>(m)) {
            k_hat = k;
        }
    }
    DecisionVector d(m, 0);
    if (k_hat == 0) {
        return d;
    }
    std::vector<double> sorted = p;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < m; ++i) {
        d[i] = p[i] <= sorted[k_hat - 1];
    }
    return d;
}

/// T statistic sweep for the symmetric variant, written from the displayed rule.
DecisionVector sym_oracle(const std::vector<double>& t, double alpha) {
    double tau = INFINITY;
    for (double c : t) {
        const double a = std::fabs(c);
        if (a == 0.0) {
            continue;
        }
        double neg = 0, pos = 0;
        for (double v : t) {
            neg += v <= -a;
            pos += v >= a;
        }
        if (pos > 0 && (1 + neg) / pos <= alpha) {
            tau = std::min(tau, a);
        }
    }
    DecisionVector d(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        d[i] = t[i] >= tau;
    }
    return d;
}

} // namespace

TEST_CASE("e-BH examples", "[procedures]") {
    CHECK(e_bh(std::vector<double>{10, 8, 1, 0}, 0.5) == DecisionVector{1, 1, 0, 0});
    CHECK(count_ones(e_bh(std::vector<double>{0, 0, 0}, 0.1)) == 0);
    CHECK(e_bh(std::vector<double>{0, 40, 0, 0}, 0.1) == DecisionVector{0, 1, 0, 0});
}

TEST_CASE("BH examples", "[procedures]") {
    CHECK(bh(std::vector<double>{0.01, 0.02, 0.5, 0.9}, 0.05) == DecisionVector{1, 1, 0, 0});
    CHECK(count_ones(bh(std::vector<double>(5, 1.0), 0.05)) == 0);
    CHECK(count_ones(bh(std::vector<double>(5, 0.0), 0.05)) == 5);
}

TEST_CASE("BH agrees with the step-up definition", "[procedures][oracle]") {
    Rng rng(20);
    for (int k = 0; k < 200; ++k) {
        std::vector<double> p(static_cast<std::size_t>(rng.uniform_int(1, 40)));
        for (auto& v : p) {
            v = rng.bernoulli(0.3) ? rng.uniform() * 0.01 : rng.uniform();
        }
        REQUIRE(bh(p, 0.1) == bh_oracle(p, 0.1));
    }
}

TEST_CASE("conformal p-values", "[procedures]") {
    const auto p = conformal_p_values(std::vector<double>{0.1, 0.5, 0.9}, std::vector<double>{0.2, 0.4, 0.6});
    CHECK_THAT(p[0], WithinAbs(0.25, 1e-15));
    CHECK_THAT(p[1], WithinAbs(0.75, 1e-15));
    CHECK(p[2] == 1.0);
    const std::vector<double> sx = {0.01, 0.02, 0.03}, sy = {0.5, 0.6, 0.7};
    CHECK(conformal_p_values(sx, sy) == std::vector<double>(3, 0.25));
    CHECK(count_ones(conformal_bh(sx, sy, 0.3)) == 3);
    CHECK(count_ones(conformal_bh(sx, sy, 0.2)) == 0);
}

TEST_CASE("Storey factor", "[procedures]") {
    // 2 of 4 p-values exceed one half: pi0 = (1 + 2) / (4 * 0.5) = 1.5, factor floored at 1
    CHECK(storey_adaptive_factor(std::vector<double>{0.1, 0.2, 0.6, 0.9}) == 1.0);
    // none exceed: pi0 = 1 / 5, factor 5
    CHECK_THAT(storey_adaptive_factor(std::vector<double>(10, 0.01)), WithinAbs(5.0, 1e-12));
}

TEST_CASE("conformal-BH variant on the fixture", "[procedures]") {
    // t = 0.05, 0.1, 0.2, 0.7 give 1, 1/2, 1/3 and (1 + 1) / 4
    CHECK(plis_cbh(fixture_f(), 0.6) == DecisionVector{1, 1, 1, 1});
    CHECK(plis_cbh(fixture_f(), 0.4) == DecisionVector{1, 1, 0, 1});
    CHECK(count_ones(plis_cbh(fixture_f(), 0.3)) == 0);
}

TEST_CASE("symmetric variant on the fixture", "[procedures]") {
    CHECK(plis_sym(fixture_f(), 0.5) == DecisionVector{1, 1, 0, 1});
    const ScorePairVector negative({0.9, 0.8}, {0.1, 0.2});
    CHECK(count_ones(plis_sym(negative, 0.9)) == 0);
}

TEST_CASE("symmetric variant agrees with the sweep oracle", "[procedures][oracle]") {
    Rng rng(21);
    for (int k = 0; k < 200; ++k) {
        const std::size_t m = static_cast<std::size_t>(rng.uniform_int(1, 50));
        std::vector<double> sx(m), sy(m), t(m);
        for (std::size_t i = 0; i < m; ++i) {
            sx[i] = std::round(rng.uniform() * (rng.bernoulli(0.5) ? 5 : 20)) / 20;
            sy[i] = std::round(rng.uniform() * 20) / 20;
            t[i] = sy[i] - sx[i];
        }
        for (double alpha : {0.1, 0.3, 0.5}) {
            REQUIRE(plis_sym(ScorePairVector(sx, sy), alpha) == sym_oracle(t, alpha));
        }
    }
}

TEST_CASE("Selective SeqStep+ example", "[procedures]") {
    const std::vector<double> p = {0.5, 0.5, 1, 0.5};
    const std::vector<std::size_t> stops = {1, 2, 3, 4};
    CHECK(selective_seqstep_plus(p, 0.5, 0.5, stops) == DecisionVector{1, 1, 0, 0});
    CHECK(count_ones(selective_seqstep_plus(std::vector<double>{1, 1, 1}, 0.5, 0.5, std::vector<std::size_t>{1, 2, 3})) ==
          0);
    CHECK(one_bit_p_values(std::vector<double>{2.0, -1.0, 0.0}) == std::vector<double>{0.5, 1.0, 1.0});
}

TEST_CASE("knockoff+ on 1-bit p-values reproduces the symmetric variant", "[procedures][property]") {
    Rng rng(22);
    for (int k = 0; k < 200; ++k) {
        const std::size_t m = static_cast<std::size_t>(rng.uniform_int(1, 60));
        std::vector<double> sx(m), sy(m), t(m);
        for (std::size_t i = 0; i < m; ++i) {
            sx[i] = rng.uniform() * (rng.bernoulli(0.3) ? 0.3 : 1.0);
            sy[i] = rng.uniform();
            if (k % 2 == 0) {
                sx[i] = std::round(sx[i] * 10) / 10;
                sy[i] = std::round(sy[i] * 10) / 10;
            }
            t[i] = sy[i] - sx[i];
        }
        for (double alpha : {0.05, 0.2, 0.5, 0.9}) {
            REQUIRE(knockoff_plus(t, alpha) == plis_sym(ScorePairVector(sx, sy), alpha));
        }
    }
}

TEST_CASE("LIS rule", "[procedures]") {
    CHECK(lis_rule(std::vector<double>{0.01, 0.02, 0.9}, 0.05) == DecisionVector{1, 1, 0});
    CHECK(lis_rule(std::vector<double>{0.9, 0.02, 0.01}, 0.05) == DecisionVector{0, 1, 1});
    CHECK(count_ones(lis_rule(std::vector<double>{0.2, 0.3}, 0.05)) == 0);
}

TEST_CASE("two-sided p-values", "[procedures]") {
    const auto p = two_sided_p_values(std::vector<double>{0.0, 1.959963984540054, -1.959963984540054});
    CHECK_THAT(p[0], WithinAbs(1.0, 1e-15));
    CHECK_THAT(p[1], WithinAbs(0.05, 1e-12));
    CHECK_THAT(p[2], WithinAbs(0.05, 1e-12));
}
