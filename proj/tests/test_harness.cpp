#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "plis/error.hpp"
#include "plis/harness.hpp"

using namespace plis;
using Catch::Matchers::WithinAbs;

namespace {

ReplicationMetrics row(double fdp, double tdp, bool ok = true) {
    ReplicationMetrics r;
    r.method = "bh";
    r.generator = "hmm";
    r.params_json = "{}";
    r.fdp = fdp;
    r.tdp = tdp;
    r.ok = ok;
    r.n_reject = ok ? 1 : -1;
    return r;
}

ExperimentPlan small_plan(std::size_t threads = 1) {
    auto config = KeyValueConfig::parse(
        "name = small\nseed = 11\nreps = 4\nalpha = 0.1\ngenerator = hmm, iid_two_group\n"
        "m = 200\na11 = 0.5, 0.8\nmethods = plis_hm, bh\nout = small\n");
    auto plan = ExperimentPlan::from_config(config);
    plan.threads = threads;
    return plan;
}

std::string raw_text(const PlanResult& result) {
    std::ostringstream out;
    write_raw_csv(out, result.rows);
    return out.str();
}

} // namespace

TEST_CASE("summaries average rows and report binomial-free standard errors", "[harness]") {
    const std::vector<ReplicationMetrics> rows{row(0.0, 0.5), row(0.1, 0.7)};
    const auto s = summarize(rows);
    CHECK_THAT(s.fdr, WithinAbs(0.05, 1e-15));
    CHECK_THAT(s.ap, WithinAbs(0.6, 1e-15));
    // sample sd of {0, 0.1} is 0.1 / sqrt(2), divided by sqrt(2)
    CHECK_THAT(s.se_fdr, WithinAbs(0.05, 1e-15));
    CHECK(s.n_rep == 2);
    CHECK(s.se_defined);
}

TEST_CASE("a single success has undefined standard errors", "[harness]") {
    const std::vector<ReplicationMetrics> rows{row(0.2, 0.4), row(0.0, 0.0, false)};
    const auto s = summarize(rows);
    CHECK(s.n_rep == 1);
    CHECK(s.n_failed == 1);
    CHECK_FALSE(s.se_defined);
    CHECK(s.se_fdr == 0.0);
    CHECK_THROWS_AS(summarize(std::span<const ReplicationMetrics>{}), Error);
}

TEST_CASE("binary outcomes give the binomial standard error", "[harness][oracle]") {
    std::vector<ReplicationMetrics> rows;
    for (int i = 0; i < 100; ++i) {
        rows.push_back(row(i < 30 ? 1.0 : 0.0, 0.0));
    }
    const auto s = summarize(rows);
    CHECK_THAT(s.se_fdr, WithinAbs(std::sqrt(0.3 * 0.7 / 99.0), 1e-12));
}

TEST_CASE("plans form the grid product", "[harness]") {
    const auto plan = small_plan();
    CHECK(plan.cells.size() == 4);
    CHECK(plan.methods.size() == 2);
    const auto result = run_plan(plan);
    CHECK(result.rows.size() == 4 * 2 * 4);
    CHECK(result.summaries.size() == 8);
    for (std::size_t i = 1; i < result.rows.size(); ++i) {
        const auto& a = result.rows[i - 1];
        const auto& b = result.rows[i];
        CHECK((a.cell_id < b.cell_id || (a.cell_id == b.cell_id && (a.method != b.method || a.rep < b.rep))));
    }
}

TEST_CASE("plan runs are reproducible across thread counts", "[harness][property]") {
    const auto one = run_plan(small_plan(1));
    const auto three = run_plan(small_plan(3));
    CHECK(raw_text(one) == raw_text(three));
}

TEST_CASE("raw output round-trips and reproduces the summaries", "[harness]") {
    const auto result = run_plan(small_plan());
    std::istringstream in(raw_text(result));
    const auto rows = read_raw_csv(in);
    REQUIRE(rows.size() == result.rows.size());
    for (const auto& s : result.summaries) {
        std::vector<ReplicationMetrics> group;
        for (const auto& r : rows) {
            if (r.cell_id == s.cell_id && r.method == s.method) {
                group.push_back(r);
            }
        }
        const auto again = summarize(group);
        CHECK_THAT(again.fdr, WithinAbs(s.fdr, 1e-12));
        CHECK_THAT(again.ap, WithinAbs(s.ap, 1e-12));
    }
}

TEST_CASE("seeds depend on the cell and the replication", "[harness]") {
    const auto plan = small_plan();
    const auto a = replication_seed(plan.seed, plan.cells[0], 0);
    CHECK(a == replication_seed(plan.seed, plan.cells[0], 0));
    CHECK(a != replication_seed(plan.seed, plan.cells[0], 1));
    CHECK(a != replication_seed(plan.seed, plan.cells[1], 0));
    CHECK(a != calibration_seed(a));
}

TEST_CASE("plan errors", "[harness]") {
    CHECK_THROWS_AS(ExperimentPlan::from_config(KeyValueConfig::parse("reps = 3\n")), Error);
    CHECK_THROWS_AS(ExperimentPlan::from_config(KeyValueConfig::parse("seed = 1\ncolour = red\n")), Error);
    CHECK_THROWS_AS(ExperimentPlan::from_config(KeyValueConfig::parse("seed = 1\nmethods = magic\n")), Error);
    CHECK_THROWS_AS(ExperimentPlan::load("/nonexistent/plan"), Error);
}

TEST_CASE("plan description reads back to the same plan", "[harness]") {
    const auto plan = small_plan();
    const auto again = ExperimentPlan::from_config(KeyValueConfig::parse(describe_plan(plan)));
    CHECK(describe_plan(again) == describe_plan(plan));
}
