#include "doctest.h"
#include "helpers.hpp"
#include "prooflab/oracle.hpp"
#include "prooflab/transforms.hpp"
#include "prooflab/width.hpp"

using namespace pl;
using pl::test::C;

TEST_CASE("k-trivial trails") {
    VarOrder o = VarOrder::from_sequence(3, {2, 3, 1});
    for (int k = 0; k <= 3; ++k) CHECK(is_k_trivial({}, o, k));
    Trail t = {{2, 0, true}, {3, 1, true}};
    for (int k = 0; k <= 3; ++k) CHECK(is_k_trivial(t, o, k));
    Trail bad = {{3, 0, true}, {2, 1, true}};
    CHECK(is_k_trivial(bad, o, 0));
    for (int k = 1; k <= 3; ++k) CHECK_FALSE(is_k_trivial(bad, o, k));
    Trail unit = {{2, 0, false}};
    CHECK_FALSE(is_k_trivial(unit, o, 1));
}

TEST_CASE("robustness of parity-substituted induction") {
    auto [tau, map] = xor_substitute(gen_induction(2), 3);
    RobustnessCertificate c = check_robust(tau, order_row_then_column(2, 3), 2);
    CHECK(c.complete);
    CHECK(c.verdict);
    CHECK(c.checked == c.total);
    CHECK(c.coverage() == doctest::Approx(1.0));
}

TEST_CASE("induction itself is not robust") {
    RobustnessCertificate c = check_robust(gen_induction(3), VarOrder::identity(3), 1);
    CHECK_FALSE(c.verdict);
    REQUIRE(c.counterexample);
    CHECK_FALSE(c.reason.empty());
}

TEST_CASE("robustness at k = every variable fails visibility") {
    // With k = 8 = |var| a total assignment is allowed, and it leaves some
    // assigned variable in no unsatisfied clause.
    auto [tau, map] = xor_substitute(gen_induction(2), 4);
    RobustnessCertificate c = check_robust(tau, order_row_then_column(2, 4), 8);
    CHECK_FALSE(c.verdict);
    REQUIRE(c.counterexample);
}

TEST_CASE("a small budget yields a partial certificate") {
    auto [tau, map] = xor_substitute(gen_induction(2), 3);
    RobustnessCertificate c = check_robust(tau, order_row_then_column(2, 3), 2, 10);
    CHECK_FALSE(c.complete);
    CHECK(c.checked == 10);
    CHECK(c.coverage() < 1.0);
}

TEST_CASE("width audit of psim output") {
    auto [tau, map] = xor_substitute(gen_induction(2), 3);
    VarOrder o = order_row_then_column(2, 3);
    ResolutionProof pi = connected_core(*saturate(tau).proof).proof;
    P0Proof p = psim(pi, tau, o);
    CheckReport r = audit_width_lower_bound(p, o, 2);
    CHECK(r.ok);
    CHECK(p0_width(p) >= 2);
    CHECK(audit_width_lower_bound(p, o, 0).ok);
}

TEST_CASE("width audit spots an uncovered clause") {
    Cnf tau = gen_induction(3);
    VarOrder id = VarOrder::identity(3);
    P0Proof p = psim(connected_core(*saturate(tau).proof).proof, tau, id);
    CheckReport r = audit_width_lower_bound(p, id, 3);
    CHECK_FALSE(r.ok);
    CHECK(r.code == "var-not-covered");
}

TEST_CASE("a loose WIDTH bound behaves like no bound") {
    auto [tau, map] = xor_substitute(gen_induction(2), 3);
    VarOrder o = order_row_then_column(2, 3);
    RunResult r = run(tau, policy_greedy_random(), Amendments::parse("PI-D,WIDTH-6", o), 100000, 1);
    REQUIRE(r.outcome == RunOutcome::Success);
    CdclWidthAudit a = audit_cdcl_width(r.trace, o, 6, 2);
    CHECK(a.successful);
    CHECK(a.report.ok);
    CHECK(a.max_learned_width <= 6);
}
