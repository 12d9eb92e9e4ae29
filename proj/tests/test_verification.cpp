#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "plis/error.hpp"
#include "plis/verification.hpp"

using namespace plis;
using Catch::Matchers::WithinAbs;

namespace {

double npdf(double x, double mean, double sd) {
    const double z = (x - mean) / sd;
    return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * M_PI));
}

} // namespace

TEST_CASE("enumeration oracle reduces to Bayes' rule for one observation", "[verification][oracle]") {
    oracle::Hmm h;
    h.initial[0] = 0.7;
    h.initial[1] = 0.3;
    h.mean[1] = 2.0;
    const double x = 1.3;
    const double p0 = 0.7 * npdf(x, 0, 1), p1 = 0.3 * npdf(x, 2, 1);
    CHECK_THAT(oracle::posterior({x}, h)[0], WithinAbs(p0 / (p0 + p1), 1e-14));
    CHECK_THAT(oracle::log_likelihood({x}, h), WithinAbs(std::log(p0 + p1), 1e-14));
}

TEST_CASE("identical emissions return the prior marginal", "[verification][oracle]") {
    oracle::Hmm h;
    h.initial[0] = 0.9;
    h.initial[1] = 0.1;
    h.transition[0][0] = 0.8;
    h.transition[0][1] = 0.2;
    h.transition[1][0] = 0.4;
    h.transition[1][1] = 0.6;
    const auto post = oracle::posterior({0.3, -1.0, 2.0}, h);
    double p = 0.9;
    for (double v : post) {
        CHECK_THAT(v, WithinAbs(p, 1e-14));
        p = p * 0.8 + (1 - p) * 0.4;
    }
}

TEST_CASE("enumeration refuses long sequences", "[verification]") {
    CHECK_THROWS_AS(oracle::posterior(std::vector<double>(17, 0.0), oracle::Hmm{}), std::invalid_argument);
    CHECK_NOTHROW(oracle::posterior(std::vector<double>(10, 0.0), oracle::Hmm{}));
}

TEST_CASE("threshold oracle", "[verification][oracle]") {
    const std::vector<double> sx{0.1, 0.2, 0.7, 0.05}, sy{0.9, 0.8, 0.3, 0.95};
    CHECK(oracle::threshold(sx, sy, 0.4) == 0.2);
    CHECK(oracle::threshold(sx, sy, 1.0) == 0.95);
    CHECK(oracle::threshold(sx, sy, 0.1) == -std::numeric_limits<double>::infinity());
    CHECK(oracle::threshold({}, {}, 0.1) == -std::numeric_limits<double>::infinity());
    const auto r = oracle::mirror_rejections(sx, sy, 0.4);
    CHECK(r == std::vector<std::uint8_t>{1, 1, 0, 1});
}

TEST_CASE("score exchangeability probe is clean for both working models", "[verification][property]") {
    for (const auto& model : {WorkingModelSpec::hmm(), WorkingModelSpec::two_group()}) {
        const auto report = exchangeability_probe(model, 40, 10, 3);
        CHECK(report.trials == 10);
        CHECK(report.swap_violations == 0);
        CHECK(report.degenerate_changes == 0);
    }
    // the HMM score couples neighbouring positions
    CHECK(exchangeability_probe(WorkingModelSpec::hmm(), 40, 10, 3).joint_changes > 0);
}
