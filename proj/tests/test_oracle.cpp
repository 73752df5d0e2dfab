#include "doctest.h"
#include "helpers.hpp"
#include "prooflab/oracle.hpp"

using namespace pl;
using pl::test::C;
using pl::test::F;

TEST_CASE("saturation") {
    auto two = saturate(F(1, {{1}, {-1}}));
    REQUIRE(two.proof);
    CHECK(two.proof->size() == 3);

    auto sat = saturate(F(2, {{1, 2}}));
    CHECK_FALSE(sat.proof);
    CHECK(sat.saturated);

    OracleBudget tiny;
    tiny.max_clauses = 3;
    auto cut = saturate(gen_random_kcnf(8, 40, 3, 2), tiny);
    CHECK_FALSE(cut.proof);
    CHECK_FALSE(cut.saturated);
}

TEST_CASE("dpll") {
    CHECK_FALSE(dpll_sat(gen_induction(3)));
    Cnf open = F(3, {{1}, {-1, 2}, {-2, 3}});
    CHECK(dpll_sat(open));
    auto m = dpll_model(open);
    REQUIRE(m);
    for (int v = 1; v <= 3; ++v) CHECK(m->get(v) == 1);
    CHECK(dpll_sat(Cnf(0, {})));
}

TEST_CASE("dpll and saturation agree") {
    int unsat = 0;
    for (uint64_t seed = 1; seed <= 150; ++seed) {
        int n = 3 + static_cast<int>(seed % 5);
        Cnf tau = gen_random_kcnf(n, 4 * n + static_cast<int>(seed % 9), 3, seed);
        auto s = saturate(tau);
        REQUIRE((s.proof || s.saturated));
        CHECK(dpll_sat(tau) == !s.proof.has_value());
        if (s.proof) {
            ++unsat;
            CHECK(check_resolution(*s.proof, tau).ok);
        }
    }
    CHECK(unsat > 10);
}

TEST_CASE("minimum ordered width") {
    CHECK(min_ordered_width(F(1, {{1}, {-1}}), VarOrder::identity(1)) == 1);
    CHECK(min_ordered_width(gen_induction(5), VarOrder::identity(5)) == 2);
    auto [x, map] = xor_substitute(gen_induction(2), 2);
    auto w = min_ordered_width(x, order_row_then_column(2, 2));
    REQUIRE(w);
    CHECK(*w >= 2);
    CHECK_FALSE(min_ordered_width(F(2, {{1, 2}}), VarOrder::identity(2)));
}
