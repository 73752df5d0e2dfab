#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "prooflab/oracle.hpp"
#include "prooflab/p0.hpp"
#include "prooflab/transforms.hpp"

using namespace pl;
using pl::test::C;
using pl::test::F;

namespace {

P0Line decision(int parent, Trail t) {
    P0Line l;
    l.rule = P0Rule::Decision;
    l.parent = parent;
    l.trail = std::move(t);
    return l;
}

// x1 and x2 both ways; refuted with decision trails only.
P0Proof four_clauses(Cnf &tau) {
    tau = F(2, {{1, 2}, {1, -2}, {-1, 2}, {-1, -2}});
    P0Builder b(2, VarOrder::identity(2));
    int a = b.axiom(C({1, 2})), bb = b.axiom(C({1, -2})), c = b.axiom(C({-1, 2})), d = b.axiom(C({-1, -2}));
    int t0 = b.decide(-1, 1, 0);
    int t00 = b.decide(t0, 2, 0);
    int x1 = b.learn(a, bb, t00);
    int t1 = b.decide(-1, 1, 1);
    int t10 = b.decide(t1, 2, 0);
    int nx1 = b.learn(c, d, t10);
    b.learn(x1, nx1, t0);
    return b.take();
}

}  // namespace

TEST_CASE("decision lines follow the order") {
    Cnf tau = F(2, {{1, 2}});
    P0Proof p;
    p.num_vars = 2;
    p.order = VarOrder::identity(2);
    p.lines.push_back(decision(-1, {{1, 0, true}}));
    CHECK(check_p0(p, tau).ok);

    P0Proof bad;
    bad.num_vars = 2;
    bad.order = VarOrder::identity(2);
    bad.lines.push_back(decision(-1, {{2, 0, true}}));
    CheckReport r = check_p0(bad, tau);
    CHECK_FALSE(r.ok);
    CHECK(r.code == "not-pi-smallest");
    CHECK(r.where == 1);
}

TEST_CASE("builder rejects broken side conditions") {
    P0Builder b(2, VarOrder::identity(2));
    CHECK_THROWS_AS(b.decide(-1, 2, 0), std::logic_error);
    int ax = b.axiom(C({1, 2}));
    int t = b.decide(-1, 1, 1);
    CHECK_THROWS_AS(b.propagate(t, 2, 1, ax), std::logic_error);
}

TEST_CASE("half-ordered step through a unit propagation") {
    // Res(x1∨x3, ¬x3∨x2) on x3 with x1∨x3 as the small side.
    Cnf tau = F(3, {{1, 3}, {-3, 2}});
    P0Builder b(3, VarOrder::identity(3));
    int cx = b.axiom(C({1, 3}));
    int dx = b.axiom(C({-3, 2}));
    int t1 = b.decide(-1, 1, 0);
    int t2 = b.propagate(t1, 3, 1, cx);
    int t3 = b.decide(t2, 2, 0);
    int res = b.learn(cx, dx, t3);
    CHECK(b.clause(res) == C({1, 2}));
    const Trail &tr = b.trail_of(t3);
    CHECK(tr[1].var == 3);
    CHECK_FALSE(tr[1].decision);
    CHECK(check_p0(b.proof(), tau).ok);
}

TEST_CASE("width of small refutations") {
    Cnf tau = F(1, {{1}, {-1}});
    P0Builder b(1, VarOrder::identity(1));
    int a = b.axiom(C({1})), na = b.axiom(C({-1}));
    int t = b.propagate(-1, 1, 1, a);
    int z = b.learn(a, na, t);
    CHECK(b.clause(z).empty());
    P0Proof p = b.take();
    CHECK(check_p0(p, tau).ok);
    CHECK(p0_width(p) == 1);
    CHECK(p.first_empty() == z);
}

TEST_CASE("decision-only trails give a half-ordered skeleton") {
    Cnf tau;
    P0Proof p = four_clauses(tau);
    REQUIRE(check_p0(p, tau).ok);
    ResolutionProof s = p0_strip_to_halfordered(p);
    CHECK(check_resolution(s, tau).ok);
    CHECK(check_half_ordered(s, VarOrder::identity(2)).ok);
    CHECK(s.clause(s.first_empty()).empty());
}

TEST_CASE("tampering is located") {
    Cnf tau;
    P0Proof p = four_clauses(tau);
    P0Proof q = p;
    q.lines.back().clause = C({1});
    CheckReport r = check_p0(q, tau);
    CHECK_FALSE(r.ok);
    CHECK(r.where == static_cast<long>(q.size()));
    P0Proof w = p;
    w.lines.push_back(P0Line{P0Rule::Weakening, C({1, 2}), {}, -1, 4, -1, -1});
    CHECK(check_p0(w, tau).code == "weakening-disallowed");
}

TEST_CASE("trail proof files round trip") {
    Cnf tau = gen_induction(5);
    ResolutionProof pi = connected_core(*saturate(tau).proof).proof;
    P0Proof p = psim(pi, tau, VarOrder::identity(5));
    std::stringstream ss;
    write_p0(ss, p);
    P0Proof back = read_p0(ss, std::nullopt);
    REQUIRE(back.size() == p.size());
    CHECK(check_p0(back, tau).ok);
    for (std::size_t k = 0; k < p.size(); ++k) {
        CHECK(back.lines[k].clause == p.lines[k].clause);
        CHECK(back.lines[k].trail == p.lines[k].trail);
    }
    std::stringstream again;
    write_p0(again, back);
    std::stringstream first;
    write_p0(first, p);
    CHECK(again.str() == first.str());
}
