#include <catch_amalgamated.hpp>

#include <cmath>

#include "plis/baseline.hpp"
#include "plis/error.hpp"
#include "plis/rng.hpp"

using namespace plis;

TEST_CASE("max-abs combiner examples", "[baseline]") {
    CHECK(combine_max_abs(2.0, -3.0) == -3.0);
    CHECK(combine_max_abs(1.7, 1.7) == 1.7);
    CHECK(combine_max_abs(-1.5, 1.5) == -1.5);
}

TEST_CASE("additive combiner examples", "[baseline]") {
    CHECK(combine_additive(2.0, -3.0) == -1.0);
    CHECK(combine_additive(0.0, 0.0) == 0.0);
    CHECK(combine_additive(1.5, 1.5) == 3.0);
    CHECK(combine(Combiner::additive, 1.0, 2.0) == 3.0);
    CHECK(parse_combiner("additive") == Combiner::additive);
    CHECK(parse_combiner(to_string(Combiner::max_abs)) == Combiner::max_abs);
    CHECK_THROWS_AS(parse_combiner("mean"), Error);
}

TEST_CASE("baseline data examples", "[baseline]") {
    const auto p = build_paired({1, -4}, {2, 3}, Combiner::max_abs);
    CHECK(std::vector<double>(p.w().begin(), p.w().end()) == std::vector<double>{2, -4});
    const auto a = build_paired({1, -4}, {2, 3}, Combiner::additive);
    CHECK(std::vector<double>(a.w().begin(), a.w().end()) == std::vector<double>{3, -1});
    const auto same = build_paired({0.3, -2}, {0.3, -2}, Combiner::max_abs);
    CHECK(std::vector<double>(same.w().begin(), same.w().end()) == std::vector<double>{0.3, -2});
    CHECK_THROWS_AS(build_paired({1, 2}, {1}, Combiner::max_abs), Error);
    CHECK_THROWS_AS(build_paired({1, NAN}, {1, 2}, Combiner::max_abs), Error);
}

TEST_CASE("substitution examples", "[baseline]") {
    const auto p = build_paired({1, -4}, {2, 3}, Combiner::max_abs);
    CHECK(substitute(p, 0, Side::test).materialize() == std::vector<double>{1, -4});
    CHECK(substitute(p, 0, Side::calibration).materialize() == std::vector<double>{2, -4});
    CHECK(substitute(p, 1, Side::test).materialize() == std::vector<double>{2, -4});
    CHECK_THROWS_AS(substitute(p, 2, Side::test), Error);
    const auto view = substitute(p, 1, Side::calibration);
    CHECK(view.size() == 2);
    CHECK(view[0] == 2);
    CHECK(view[1] == 3);
    CHECK(view.position() == 1);
}

TEST_CASE("combiners are symmetric", "[baseline][property]") {
    Rng rng(1);
    for (int i = 0; i < 100000; ++i) {
        const double a = rng.normal(0, 3), b = rng.normal(0, 3);
        REQUIRE(combine_max_abs(a, b) == combine_max_abs(b, a));
        REQUIRE(combine_additive(a, b) == combine_additive(b, a));
    }
}

TEST_CASE("flipping-coin property of the max-abs baseline", "[baseline][property]") {
    Rng rng(2);
    int from_x = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal(), y = rng.normal();
        from_x += combine_max_abs(x, y) == x;
    }
    CHECK(std::fabs(from_x / double(n) - 0.5) < 0.01);
}

TEST_CASE("swapping a pair leaves the baseline and other substitutions unchanged", "[baseline][property]") {
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t m = 12;
        std::vector<double> x(m), y(m);
        for (std::size_t j = 0; j < m; ++j) {
            x[j] = rng.normal(1, 2);
            y[j] = rng.normal();
        }
        const std::size_t i = static_cast<std::size_t>(rng.uniform_int(0, m - 1));
        auto xs = x, ys = y;
        std::swap(xs[i], ys[i]);
        for (auto combiner : {Combiner::max_abs, Combiner::additive}) {
            const auto p = build_paired(x, y, combiner);
            const auto q = build_paired(xs, ys, combiner);
            REQUIRE(std::vector<double>(p.w().begin(), p.w().end()) == std::vector<double>(q.w().begin(), q.w().end()));
            REQUIRE(substitute(p, i, Side::test).materialize() == substitute(q, i, Side::calibration).materialize());
            REQUIRE(substitute(p, i, Side::calibration).materialize() == substitute(q, i, Side::test).materialize());
            for (std::size_t j = 0; j < m; ++j) {
                if (j != i) {
                    REQUIRE(substitute(p, j, Side::test).materialize() == substitute(q, j, Side::test).materialize());
                    REQUIRE(substitute(p, j, Side::calibration).materialize() ==
                            substitute(q, j, Side::calibration).materialize());
                }
            }
        }
    }
}
