#include <set>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "prooflab/oracle.hpp"

using namespace pl;
using pl::test::C;
using pl::test::F;

TEST_CASE("clauses are canonical and reject complementary pairs") {
    CHECK(C({3, -1, 3}) == C({-1, 3}));
    CHECK(C({2, 1}).str() == C({1, 2}).str());
    CHECK_THROWS_AS(C({1, -1}), std::invalid_argument);
    CHECK(C({-2, 5}).sign_of(2) == 0);
    CHECK(C({-2, 5}).sign_of(5) == 1);
    CHECK(C({-2, 5}).sign_of(3) == -1);
    CHECK(resolve(C({1, 2}), C({-2}), 2) == C({1}));
    CHECK_FALSE(resolve(C({1, 2}), C({-1, -2}), 2));
    CHECK(circ(C({1, 2}), C({3}), 2) == C({1, 2}));
}

TEST_CASE("restrict_cnf") {
    Restriction rho(2);
    rho.set(2, 0);
    // ¬x2 is satisfied by x2 = 0, so only x1 survives
    CHECK(restrict_cnf(F(2, {{1, 2}, {-2}}), rho).clauses() == F(2, {{1}}).clauses());
    CHECK(restrict_cnf(F(2, {{1, 2}}), Restriction(2)).clauses() == F(2, {{1, 2}}).clauses());
    Restriction r1(2);
    r1.set(1, 0);
    Cnf out = restrict_cnf(F(2, {{1}, {-1, 2}, {-2}}), r1);
    CHECK(out.clauses() == F(2, {{}, {-2}}).clauses());
}

TEST_CASE("induction formulas") {
    CHECK(gen_induction(3).clauses() == F(3, {{1}, {-1, 2}, {-2, 3}, {-3}}).clauses());
    CHECK(gen_induction(1).clauses() == F(1, {{1}, {-1}}).clauses());
    for (int n = 1; n <= 12; ++n) CHECK(gen_induction(n).size() == static_cast<std::size_t>(n + 1));
}

TEST_CASE("parity substitution clause counts") {
    auto [x, map] = xor_substitute(gen_induction(3), 2);
    CHECK(x.size() == 12);
    CHECK(x.num_vars() == 6);
    CHECK(map.var(2, 1) == 3);
    CHECK(xor_substitute(gen_induction(4), 1).first.size() == 5);
    auto [one, m1] = xor_substitute(F(1, {{1}}), 2);
    CHECK(one.clauses() == F(2, {{1, 2}, {-1, -2}}).clauses());
    // 2^{2(r-1)}(n-1) + 2^r
    for (int r = 2; r <= 4; ++r)
        for (int n = 2; n <= 5; ++n)
            CHECK(xor_substitute(gen_induction(n), r).first.size() ==
                  static_cast<std::size_t>((1 << (2 * (r - 1))) * (n - 1) + (1 << r)));
}

TEST_CASE("every substituted clause is falsified exactly by the forbidden parities") {
    auto [x, map] = xor_substitute(gen_induction(2), 3);
    for (const Clause &c : x.clauses()) {
        std::set<int> rows;
        for (int v : c.vars()) rows.insert(map.row(v));
        for (int row : rows) {
            int cnt = 0;
            for (int v : c.vars()) cnt += map.row(v) == row;
            CHECK(cnt == map.cols);
        }
    }
}

TEST_CASE("stone formula on the three vertex graph") {
    PointedGraph g{3, {{1, 3}, {2, 3}}, 3};
    Cnf s = gen_stone(g, 3);
    // Of the 27 propagation clauses, 12 repeat a stone and are tautologies or subsumed repeats.
    CHECK(s.size() == 24);
    CHECK(s.num_vars() == 12);
    CHECK_FALSE(dpll_sat(s));
    VarOrder o = order_stone(g, 3);
    StoneMap sm{3, 3};
    std::vector<int> want = {sm.P(3, 1), sm.P(3, 2), sm.P(3, 3), sm.P(2, 1), sm.P(2, 2), sm.P(2, 3),
                             sm.P(1, 1), sm.P(1, 2), sm.P(1, 3), sm.R(1),    sm.R(2),    sm.R(3)};
    CHECK(o.sequence() == want);
}

TEST_CASE("pointed graphs are deterministic and well formed") {
    for (uint64_t seed = 1; seed <= 10; ++seed) {
        PointedGraph g3 = gen_pointed_graph(3, seed);
        CHECK(g3.edges.size() == 2);
        CHECK(g3.preds(g3.sink).size() == 2);
    }
    for (int n = 3; n <= 8; ++n)
        for (uint64_t seed = 1; seed <= 30; ++seed) {
            PointedGraph a = gen_pointed_graph(n, seed), b = gen_pointed_graph(n, seed);
            CHECK(a.edges == b.edges);
            CHECK_NOTHROW(a.validate());
            CHECK(a.topologically_numbered());
        }
}

TEST_CASE("row and column parallel orders") {
    VarOrder rc = order_row_then_column(2, 2);
    CHECK(rc.sequence() == std::vector<int>{1, 3, 2, 4});
    CHECK(order_row_then_column(4, 1).sequence() == VarOrder::identity(4).sequence());
    for (int n = 1; n <= 4; ++n)
        for (int r = 1; r <= 3; ++r) {
            XorMap m{n, r};
            CHECK(is_row_parallel(order_row_then_column(n, r), m));
            CHECK(is_column_parallel(order_row_then_column(n, r), m));
        }
    XorMap m{2, 2};
    CHECK_FALSE(is_row_parallel(VarOrder::identity(4), m));
    XorMap single{1, 3};
    CHECK(is_row_parallel(VarOrder::identity(3), single));
    CHECK_FALSE(is_row_parallel(VarOrder::from_sequence(3, {2, 1, 3}), single));
}

TEST_CASE("small clauses") {
    VarOrder id = VarOrder::identity(4);
    CHECK(is_k_small(C({1, 2}), id, 2));
    CHECK_FALSE(is_k_small(C({1, 3}), id, 2));
    CHECK(is_almost_k_small(C({1, 3}), id, 2));
    CHECK_FALSE(is_k_small(C({3, 4}), id, 2));
    CHECK_FALSE(is_almost_k_small(C({3, 4}), id, 2));
}

TEST_CASE("file formats round trip") {
    Cnf tau = xor_substitute(gen_induction(3), 2).first;
    tau.comments = {"round trip"};
    std::stringstream ss;
    write_dimacs(ss, tau);
    Cnf back = read_dimacs(ss);
    CHECK(back.clauses() == tau.clauses());
    CHECK(back.comments == tau.comments);
    CHECK(content_hash(back) == content_hash(tau));

    VarOrder o = order_row_then_column(3, 2);
    std::stringstream os;
    write_order(os, o);
    CHECK(read_order(os).sequence() == o.sequence());
    std::stringstream ident("identity\n");
    CHECK(read_order(ident, 5).sequence() == VarOrder::identity(5).sequence());

    PointedGraph g = gen_pointed_graph(6, 4);
    std::stringstream gs;
    write_graph(gs, g);
    PointedGraph g2 = read_graph(gs);
    CHECK(g2.edges == g.edges);
    CHECK(g2.sink == g.sink);
}

TEST_CASE("malformed DIMACS is a parse error") {
    std::stringstream a("p cnf 2 1\n1 3 0\n");
    CHECK_THROWS_AS(read_dimacs(a), ParseError);
    std::stringstream c("1 2 0\n");
    CHECK_THROWS_AS(read_dimacs(c), ParseError);
}
