#include <catch_amalgamated.hpp>

#include <cmath>

#include "plis/core.hpp"
#include "plis/distributions.hpp"
#include "plis/error.hpp"

using namespace plis;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double phi_oracle(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

/// Normal quantile by bisection on the erfc-based cdf.
double quantile_oracle(double p) {
    double lo = -40.0, hi = 40.0;
    for (int k = 0; k < 200; ++k) {
        const double mid = 0.5 * (lo + hi);
        (phi_oracle(mid) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST_CASE("fdp and tdp on hand-counted examples", "[core]") {
    auto m = compute_fdp_tdp(DecisionVector{0, 0, 0}, TruthVector{1, 0, 1});
    CHECK(m.fdp == 0.0);
    CHECK(m.tdp == 0.0);
    m = compute_fdp_tdp(DecisionVector{1, 1, 0}, TruthVector{1, 0, 1});
    CHECK(m.fdp == 0.5);
    CHECK(m.tdp == 0.5);
    m = compute_fdp_tdp(DecisionVector{1, 1}, TruthVector{1, 1});
    CHECK(m.fdp == 0.0);
    CHECK(m.tdp == 1.0);
}

TEST_CASE("fdp and tdp reject mismatched lengths", "[core]") {
    CHECK_THROWS_AS(compute_fdp_tdp(DecisionVector{1}, TruthVector{1, 0}), Error);
}

TEST_CASE("fdp and tdp stay in the unit interval for every binary input up to length 8", "[core][property]") {
    for (std::size_t m = 1; m <= 8; ++m) {
        for (unsigned d = 0; d < (1u << m); ++d) {
            for (unsigned t = 0; t < (1u << m); ++t) {
                DecisionVector dv(m);
                TruthVector tv(m);
                std::size_t rejected = 0, false_rejections = 0, signals = 0, hits = 0;
                for (std::size_t i = 0; i < m; ++i) {
                    dv[i] = (d >> i) & 1u;
                    tv[i] = (t >> i) & 1u;
                    rejected += dv[i];
                    false_rejections += dv[i] && !tv[i];
                    signals += tv[i];
                    hits += dv[i] && tv[i];
                }
                const auto r = compute_fdp_tdp(dv, tv);
                REQUIRE(r.fdp >= 0.0);
                REQUIRE(r.fdp <= 1.0);
                REQUIRE(r.tdp >= 0.0);
                REQUIRE(r.tdp <= 1.0);
                REQUIRE(r.fdp == (rejected ? double(false_rejections) / double(rejected) : 0.0));
                REQUIRE(r.tdp == (signals ? double(hits) / double(signals) : 0.0));
            }
        }
    }
}

TEST_CASE("index and decision conversions round trip", "[core]") {
    const std::vector<std::size_t> idx = {0, 3, 4};
    const auto d = indices_to_decisions(idx, 6);
    CHECK(d == DecisionVector{1, 0, 0, 1, 1, 0});
    CHECK(decisions_to_indices(d) == idx);
    CHECK(count_ones(d) == 3);
    CHECK_THROWS_AS(indices_to_decisions(std::vector<std::size_t>{6}, 6), Error);
}

TEST_CASE("non-finite observations are rejected at ingestion", "[core]") {
    const std::vector<double> ok = {1.0, -2.0};
    CHECK_NOTHROW(require_finite(ok, "x"));
    CHECK_THROWS_AS(require_finite(std::vector<double>{1.0, NAN}, "x"), Error);
    CHECK_THROWS_AS(require_finite(std::vector<double>{INFINITY}, "x"), Error);
}

TEST_CASE("z-transform examples", "[core]") {
    CHECK(z_transform(1.3, NullDistribution::normal()).z == 1.3);
    // median of chi-squared(1) is 2 erfinv(1/2)^2
    const double erfinv_half = 0.47693627620446987338;
    CHECK_THAT(z_transform(2.0 * erfinv_half * erfinv_half, NullDistribution::chi_squared(1)).z, WithinAbs(0.0, 1e-9));
    CHECK_THAT(z_transform(0.975, NullDistribution::uniform(0, 1)).z, WithinAbs(quantile_oracle(0.975), 1e-9));
    CHECK_THAT(quantile_oracle(0.975), WithinAbs(1.959963984540054, 1e-12));
}

TEST_CASE("z-transform is the identity under the standard normal on [-6, 6]", "[core][property]") {
    for (double x = -6.0; x <= 6.0; x += 0.01) {
        REQUIRE_THAT(z_transform(x, NullDistribution::normal()).z, WithinAbs(x, 1e-12));
    }
    // a non-standard normal goes through the quantile path
    for (double x = -5.0; x <= 5.0; x += 0.05) {
        REQUIRE_THAT(z_transform(2.0 * x + 1.0, NullDistribution::normal(1.0, 2.0)).z, WithinAbs(x, 1e-8));
    }
}

TEST_CASE("z-transform is strictly increasing", "[core][property]") {
    for (const auto& f0 : {NullDistribution::chi_squared(3), NullDistribution::uniform(-1, 2), NullDistribution::normal(0, 3)}) {
        double previous = -INFINITY;
        for (double x = -0.99; x < 1.99; x += 0.01) {
            const double z = z_transform(x, f0).z;
            if (f0.cdf(x) > 1e-12 && f0.cdf(x) < 1 - 1e-12) {
                REQUIRE(z > previous);
                previous = z;
            }
        }
    }
}

TEST_CASE("z-transform clamps at the tails and flags it", "[core]") {
    const auto low = z_transform(-1.0, NullDistribution::uniform(0, 1));
    CHECK(low.clamped);
    CHECK_THAT(low.z, WithinRel(quantile_oracle(z_transform_epsilon), 1e-6));
    const auto high = z_transform(2.0, NullDistribution::uniform(0, 1));
    CHECK(high.clamped);
    CHECK(high.z > 7.0);
    CHECK_FALSE(z_transform(0.5, NullDistribution::uniform(0, 1)).clamped);
}

TEST_CASE("normal quantile agrees with a bisection oracle", "[core][oracle]") {
    for (double p : {1e-12, 1e-8, 1e-4, 0.01, 0.025, 0.2, 0.5, 0.7, 0.975, 0.999, 1 - 1e-8}) {
        const double q = quantile_oracle(p);
        REQUIRE_THAT(normal_quantile(p), WithinAbs(q, 1e-9 * std::max(1.0, std::fabs(q))));
    }
    for (double x : {-8.0, -3.0, -0.5, 0.0, 1.0, 4.0}) {
        REQUIRE_THAT(normal_cdf(x), WithinRel(phi_oracle(x), 1e-12));
    }
}

TEST_CASE("null densities integrate to one", "[core]") {
    for (const auto& f0 : {NullDistribution::normal(1, 2), NullDistribution::uniform(-1, 3), NullDistribution::chi_squared(4)}) {
        double total = 0.0;
        const double h = 1e-3;
        for (double x = -30.0; x < 60.0; x += h) {
            total += f0.density(x + 0.5 * h) * h;
        }
        REQUIRE_THAT(total, WithinAbs(1.0, 1e-3));
    }
}

TEST_CASE("null distributions parse and print", "[core]") {
    CHECK(NullDistribution::parse("normal(0, 1)").is_standard_normal());
    const auto u = NullDistribution::parse(" uniform( -1,2 ) ");
    CHECK(u.family() == NullDistribution::Family::uniform);
    CHECK(u.first() == -1.0);
    CHECK(u.second() == 2.0);
    CHECK(NullDistribution::parse("chisq(3)").family() == NullDistribution::Family::chi_squared);
    CHECK(NullDistribution::parse(NullDistribution::chi_squared(3).to_string()).first() == 3.0);
    CHECK_THROWS_AS(NullDistribution::parse("gamma(1, 2)"), Error);
    CHECK_THROWS_AS(NullDistribution::parse("chisq(1, 2)"), Error);
    CHECK_THROWS_AS(NullDistribution::parse("normal(0)"), Error);
}
