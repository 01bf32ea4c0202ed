#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qsum/verify.hpp"

#include "json.hpp"

#include <algorithm>
#include <stdexcept>

using namespace qsum;

TEST_CASE("enumerate_oracles: count, order, cap") {
    const auto tables = enumerate_oracles(2, 3);
    REQUIRE(tables.size() == 9);
    CHECK(tables.front().values() == std::vector<unsigned>{0, 0});
    CHECK(tables[1].values() == std::vector<unsigned>{0, 1});
    CHECK(tables[3].values() == std::vector<unsigned>{1, 0});
    CHECK(tables.back().values() == std::vector<unsigned>{2, 2});

    CHECK(enumerate_oracles(1, 5).size() == 5);
    CHECK(enumerate_oracles(3, 3).size() == 27);

    // all distinct
    for (std::size_t i = 0; i < tables.size(); ++i)
        for (std::size_t j = i + 1; j < tables.size(); ++j)
            CHECK(!(tables[i] == tables[j]));

    CHECK_THROWS_AS(enumerate_oracles(4, 4, 255), std::invalid_argument);
    CHECK(enumerate_oracles(4, 4, 256).size() == 256);
    CHECK_THROWS_AS(enumerate_oracles(0, 3), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_oracles(2, 1), std::invalid_argument);
}

TEST_CASE("exhaustive_success: pinned cells are oracle-uniform") {
    const SuccessSummary a = exhaustive_success(2, 3, 1);
    CHECK(a.min == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    CHECK(a.max == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    CHECK(a.mean == doctest::Approx(2.0 / 3.0).epsilon(1e-9));

    const SuccessSummary b = exhaustive_success(3, 3, 1);
    CHECK(b.min == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(b.max == doctest::Approx(1.0).epsilon(1e-9));

    const SuccessSummary c = exhaustive_success(5, 3, 2);
    CHECK(c.min == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    CHECK(c.max == doctest::Approx(2.0 / 3.0).epsilon(1e-9));

    CHECK_THROWS_AS(exhaustive_success(4, 3, 0), std::invalid_argument);
    CHECK_THROWS_AS(exhaustive_success(12, 4, 1, 1000), std::invalid_argument);
}

TEST_CASE("reference_trace shapes and start state") {
    const FunctionTable f(3, {1, 2});
    const auto steps = reference_trace(f, SmallCase::two_trits);
    REQUIRE(steps.size() == 4);
    CHECK(phase_equal(steps[0], initial_state(2, 3, 1, 2), 1e-12));

    const FunctionTable g(3, {1, 2, 0});
    const auto longer = reference_trace(g, SmallCase::three_trits);
    REQUIRE(longer.size() == 7);
    CHECK(phase_equal(longer[0], initial_state(3, 3, 1, 3), 1e-12));
    // Σg = 0: the displayed final state is |0⟩|0⟩
    CHECK(phase_equal(longer[6], JointState::basis(3, 3, 0, 0), 1e-12));

    CHECK_THROWS_AS(reference_trace(f, SmallCase::three_trits), std::invalid_argument);
}

TEST_CASE("check_suite: default grid passes everything") {
    const VerificationReport report = check_suite(GridSpec{});
    CHECK(report.checks.size() > 50);
    CHECK(report.failed == 0);
    CHECK(report.passed == report.checks.size());
    CHECK(report.all_pass());

    for (const char* name :
         {"operator_unitarity", "phase_kickback", "oracle_composition",
          "estimator_law", "estimator_central_mass", "two_trit_trace",
          "three_trit_trace", "phase_split_identity", "success_formula",
          "per_oracle_uniformity", "query_accounting", "approx_band",
          "useless_region", "classical_read_exact", "identify_values",
          "curve_dominance", "curve_shape"}) {
        const bool found =
            std::any_of(report.checks.begin(), report.checks.end(),
                        [&](const CheckResult& c) { return c.name == name; });
        CHECK_MESSAGE(found, name);
    }
}

TEST_CASE("check_suite: zero tolerance makes floating checks fail") {
    GridSpec grid;
    grid.max_n = 3;
    grid.max_k = 3;
    grid.tolerance = 0;
    const VerificationReport report = check_suite(grid);
    CHECK(report.failed > 0);
    CHECK_FALSE(report.all_pass());
    CHECK(report.passed + report.failed == report.checks.size());
}

TEST_CASE("check_suite validation") {
    GridSpec bad;
    bad.max_k = 1;
    CHECK_THROWS_AS(check_suite(bad), std::invalid_argument);
    GridSpec neg;
    neg.tolerance = -1;
    CHECK_THROWS_AS(check_suite(neg), std::invalid_argument);
    GridSpec tiny;
    tiny.oracle_cap = 10;
    CHECK_THROWS_AS(check_suite(tiny), std::invalid_argument);
    GridSpec zero;
    zero.max_n = 0;
    CHECK_THROWS_AS(check_suite(zero), std::invalid_argument);
}

TEST_CASE("report_json: well-formed and deterministic") {
    GridSpec grid;
    grid.max_n = 3;
    grid.max_k = 3;
    const std::string a = report_json(check_suite(grid));
    const std::string b = report_json(check_suite(grid));
    CHECK(a == b);

    const auto parsed = nlohmann::json::parse(a);
    CHECK(parsed.contains("grid"));
    CHECK(parsed.contains("checks"));
    CHECK(parsed["all_pass"].get<bool>());
    CHECK(parsed["failed"].get<int>() == 0);
    CHECK(parsed["grid"]["max_n"].get<int>() == 3);
    CHECK(parsed["checks"].is_array());
    CHECK(!parsed["checks"].empty());
    for (const auto& c : parsed["checks"]) {
        CHECK(c.contains("name"));
        CHECK(c.contains("instance"));
        CHECK(c.contains("expected"));
        CHECK(c.contains("observed"));
        CHECK(c.contains("pass"));
    }
}
