#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "plis/data_io.hpp"
#include "plis/error.hpp"

using namespace plis;

namespace {

std::string error_text(const std::string& input) {
    std::istringstream in(input);
    try {
        read_table(in, "data.csv");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::parse_error);
        return e.what();
    }
    FAIL("no error");
    return {};
}

} // namespace

TEST_CASE("tables with and without headers", "[data_io]") {
    std::istringstream a("# comment\nx,label\n1.5,0\n\n-2,1\n");
    const auto t = read_table(a, "a");
    CHECK(t.names == std::vector<std::string>{"x", "label"});
    CHECK(t.rows() == 2);
    CHECK(t.column("x") == std::vector<double>{1.5, -2.0});
    CHECK(t.column("2") == std::vector<double>{0.0, 1.0});
    CHECK(t.lines == std::vector<std::size_t>{3, 5});
    CHECK_THROWS_AS(t.column("3"), Error);
    CHECK_THROWS_AS(t.column("y"), Error);

    std::istringstream b("1\t2\n3 4\n5,6\n");
    const auto u = read_table(b, "b");
    CHECK(u.names.empty());
    CHECK(u.column("1") == std::vector<double>{1, 3, 5});
}

TEST_CASE("malformed tables report the line", "[data_io]") {
    CHECK_THAT(error_text("1\n2\nabc\n"), Catch::Matchers::ContainsSubstring("data.csv:3"));
    CHECK_THAT(error_text("1,2\n3\n"), Catch::Matchers::ContainsSubstring("data.csv:2"));
    CHECK_THAT(error_text("# only a comment\n"), Catch::Matchers::ContainsSubstring("no data rows"));
    CHECK_THAT(error_text("x\n"), Catch::Matchers::ContainsSubstring("no data rows"));
}

TEST_CASE("missing files are io errors", "[data_io]") {
    try {
        read_table_file("/nonexistent/file.csv");
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::io_error);
    }
}

TEST_CASE("result files round-trip", "[data_io]") {
    ProcedureResult r;
    r.decisions = {1, 0};
    r.scores = ScorePairVector({0.1, 0.7}, {0.9, 0.3});
    r.q_values = {0.25, 1.0};
    r.e_values = {2.0, 0.0};
    std::ostringstream out;
    write_test_output(out, {1.5, -0.25}, r);
    std::istringstream in(out.str());
    const auto rows = read_test_output(in);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].index == 1);
    CHECK(rows[0].x == 1.5);
    CHECK(rows[0].rejected);
    CHECK(rows[1].s_y == 0.3);
    CHECK(rows[1].q_value == 1.0);
    CHECK_FALSE(rows[1].rejected);

    std::ostringstream no_x;
    write_test_output(no_x, {}, r);
    std::istringstream in2(no_x.str());
    CHECK_FALSE(read_test_output(in2)[0].x.has_value());
}
