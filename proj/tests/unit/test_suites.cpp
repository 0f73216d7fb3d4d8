#include <doctest.h>

#include "qcomm/suites.hpp"

using namespace qcomm;

TEST_CASE("every suite passes at reduced trial counts") {
    for (const auto &id : suite_ids()) {
        if (id == "all") {
            continue;
        }
        CAPTURE(id);
        auto r = run_suite(id, 20, 11);
        CHECK(r.passed());
        CHECK_FALSE(r.results.empty());
        for (const auto &s : r.results) {
            CAPTURE(s.inequality);
            CHECK(s.violations == 0);
            CHECK(s.failing_inputs.empty());
        }
    }
}

TEST_CASE("suites are deterministic in the seed") {
    auto a = run_suite("quasi-triangle", 30, 5);
    auto b = run_suite("quasi-triangle", 30, 5);
    REQUIRE(a.results.size() == b.results.size());
    for (std::size_t i = 0; i < a.results.size(); ++i) {
        CHECK(a.results[i].min_slack == b.results[i].min_slack);
        CHECK(a.results[i].worst_case_seed == b.results[i].worst_case_seed);
    }
    CHECK(default_trials("relative-entropy") == 1000);
    CHECK_THROWS_AS(run_suite("unknown", 1, 1), std::invalid_argument);
}

TEST_CASE("helstrom scenarios meet the block-diagonal floor") {
    auto r = run_suite("block-diagonal", 20, 2);
    for (const char *eps : {"0.05", "0.10", "0.20"}) {
        CHECK(r.stats(std::string("block-diagonal-boolean-eps-") + eps).violations == 0);
    }
}
