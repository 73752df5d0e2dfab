#include <algorithm>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "prooflab/oracle.hpp"
#include "prooflab/transforms.hpp"

using namespace pl;
using pl::test::C;
using pl::test::F;

namespace {

long resolutions(const ResolutionProof &pi) {
    return std::count_if(pi.nodes.begin(), pi.nodes.end(), [](const ProofNode &v) { return v.rule == Rule::Resolution; });
}

bool has_clause_line(const P0Proof &p, const Clause &c) { return p.find_clause(c).has_value(); }

RunTrace decision_l_run(const Cnf &tau, const VarOrder &order, uint64_t seed) {
    RunResult r = run(tau, policy_greedy_random(), Amendments::parse("PI-D,DECISION-L", order), 100000, seed);
    REQUIRE(r.outcome == RunOutcome::Success);
    return r.trace;
}

}  // namespace

TEST_CASE("half_to_ordered postpones an early small-side resolution") {
    // x1 is resolved away first although it is the π-smallest variable.
    Cnf tau = F(2, {{1, 2}, {-1}, {-2}});
    VarOrder id = VarOrder::identity(2);
    ResolutionProof pi;
    pi.num_vars = 2;
    int a = pi.add_axiom(C({1, 2})), b = pi.add_axiom(C({-1})), c = pi.add_axiom(C({-2}));
    int d = pi.add_resolution(a, b, 1);
    pi.add_resolution(d, c, 2);
    REQUIRE(check_half_ordered(pi, id).ok);
    REQUIRE_FALSE(check_ordered(pi, id).ok);
    HalfToOrderedReport rep;
    ResolutionProof o = half_to_ordered(pi, id, &rep);
    CHECK(check_resolution(o, tau).ok);
    CHECK(check_ordered(o, id).ok);
    const ProofNode &sink = o.nodes[o.first_empty()];
    CHECK(sink.pivot == 1);
    CHECK(o.size() <= 2 * pi.size());
}

TEST_CASE("half_to_ordered leaves ordered proofs alone") {
    for (int n = 2; n <= 7; ++n) {
        VarOrder id = VarOrder::identity(n);
        ResolutionProof pi = connected_core(*saturate(gen_induction(n)).proof).proof;
        if (!check_ordered(pi, id).ok) continue;
        ResolutionProof o = half_to_ordered(pi, id);
        CHECK(o.size() == pi.size());
    }
}

TEST_CASE("ordered_up_to on the extremes") {
    Cnf tau = gen_induction(5);
    VarOrder id = VarOrder::identity(5);
    ResolutionProof pi = connected_core(*saturate(tau).proof).proof;
    CHECK(ordered_up_to(pi, id, 0));
    ResolutionProof o = half_to_ordered(pi, id);
    CHECK(ordered_up_to(o, id, 5));
}

TEST_CASE("CDCL to half-ordered to ordered, and back") {
    for (uint64_t seed = 1; seed <= 12; ++seed) {
        int n = 4 + static_cast<int>(seed % 4);
        Cnf tau = seed % 3 == 0 ? gen_induction(n) : test::unsat_corpus(1, n, n, seed * 31)[0];
        VarOrder id = VarOrder::identity(n);
        RunTrace t = decision_l_run(tau, id, seed);
        ResolutionProof h = cdcl_to_half(t, id);
        CHECK(check_resolution(h, tau).ok);
        CHECK(check_half_ordered(h, id).ok);
        ResolutionProof o = half_to_ordered(h, id);
        CHECK(check_ordered(o, id).ok);
        CHECK(o.size() <= static_cast<std::size_t>(n) * h.size());
        std::size_t longest = 0;
        RunTrace back = half_proof_to_run(o, tau, id, &longest);
        CHECK(verify_run(back, Amendments::parse("PI-D,DECISION-L", id)).ok);
        CHECK(longest <= static_cast<std::size_t>(n + 1));
    }
}

TEST_CASE("half_to_cdcl on unit premises learns 0") {
    Cnf tau = F(1, {{1}, {-1}});
    CdclState s(tau);
    auto acts = half_to_cdcl(s, C({1}), C({-1}), VarOrder::identity(1));
    REQUIRE_FALSE(acts.empty());
    CHECK(acts.back().kind == ActionKind::Learn);
    CHECK(acts.back().clause.empty());
    CHECK(acts.size() <= 2);
}

TEST_CASE("half_to_cdcl adds the resolvent") {
    Cnf tau = F(3, {{2}, {-2, 3}});
    CdclState s(tau);
    VarOrder id = VarOrder::identity(3);
    auto acts = half_to_cdcl(s, C({2}), C({-2, 3}), id);
    REQUIRE_FALSE(acts.empty());
    CHECK(acts.size() <= 4);
    CdclState cur = s;
    for (const auto &a : acts) cur = transition(cur, a);
    CHECK(cur.contains(C({3})));
    CHECK(cur.trail().empty());
}

TEST_CASE("p0 and CDCL translate into each other within a factor n") {
    for (uint64_t seed = 1; seed <= 10; ++seed) {
        int n = 4 + static_cast<int>(seed % 3);
        Cnf tau = test::unsat_corpus(1, n, n, seed * 17)[0];
        VarOrder id = VarOrder::identity(n);
        RunTrace t = decision_l_run(tau, id, seed);
        P0Proof p = p0_from_cdcl(t, id);
        CHECK(check_p0(p, tau).ok);
        CHECK(p.first_empty() >= 0);
        CHECK(p.size() <= static_cast<std::size_t>(n) * t.actions.size());
        RunTrace back = cdcl_from_p0(p, tau);
        CHECK(verify_run(back, Amendments::parse("PI-D,FIRST-L", id)).ok);
        CHECK(back.actions.size() <= static_cast<std::size_t>(n) * p.size());
    }
}

TEST_CASE("cdcl_from_p0 on a formula holding 0") {
    Cnf tau = F(1, {{}, {1}});
    P0Builder b(1, VarOrder::identity(1));
    b.axiom(Clause());
    RunTrace t = cdcl_from_p0(b.take(), tau);
    CHECK(t.actions.empty());
    CHECK(t.terminal);
}

TEST_CASE("deleting a variable from the three clause refutation") {
    Cnf tau = F(2, {{1}, {-1, 2}, {-2}});
    ResolutionProof pi;
    pi.num_vars = 2;
    int a = pi.add_axiom(C({1})), b = pi.add_axiom(C({-1, 2})), c = pi.add_axiom(C({-2}));
    int d = pi.add_resolution(a, b, 1);
    pi.add_resolution(d, c, 2);
    DeletionReport rep;
    ResolutionProof out = delete_vars(pi, {1}, &rep);
    CHECK(out.size() == 3);
    CHECK(rep.s_resolutions == 1);
    CHECK(out.clause(out.first_empty()).empty());
    CHECK(static_cast<long>(out.size()) <= static_cast<long>(pi.size()) - rep.s_resolutions);
    for (const auto &v : out.nodes) CHECK_FALSE(v.clause.has_var(1));
    CHECK_THROWS_AS(delete_vars(pi, {1, 2}), std::invalid_argument);
}

TEST_CASE("deletion respects the size bound") {
    std::mt19937_64 rng(11);
    int pairs = 0;
    for (const Cnf &tau : test::unsat_corpus(15, 4, 7, 500)) {
        ResolutionProof pi = connected_core(*saturate(tau).proof).proof;
        std::vector<int> V = proof_vars(pi);
        for (int rep = 0; rep < 4; ++rep, ++pairs) {
            std::shuffle(V.begin(), V.end(), rng);
            std::vector<int> S(V.begin(), V.begin() + 1 + static_cast<long>(rng() % (V.size() - 1)));
            DeletionReport dr;
            ResolutionProof out = delete_vars(pi, S, &dr);
            CHECK(static_cast<long>(out.size()) <= static_cast<long>(pi.size()) - dr.s_resolutions);
            CHECK(out.first_empty() >= 0);
            for (const auto &v : out.nodes)
                for (int x : S) CHECK_FALSE(v.clause.has_var(x));
        }
    }
    CHECK(pairs == 60);
}

TEST_CASE("weakening fragment lengths") {
    // (C∨D)|_t = 0 with only x3 left: one weakening, one propagation, one learning.
    VarOrder id3 = VarOrder::identity(3);
    WeakeningFragment f = weakening_step(C({1, 3}), C({1, -3}), {{1, 0, true}, {2, 0, true}}, C({1, 2}), id3, 3);
    CHECK(f.length == 3);
    CHECK(f.proof.lines[f.result].clause == C({1}));

    for (int n = 2; n <= 7; ++n) {
        VarOrder id = VarOrder::identity(n);
        std::vector<int> c, d;
        for (int v = 1; v < n; ++v) c.push_back(v), d.push_back(v);
        c.push_back(n);
        d.push_back(-n);
        WeakeningFragment g = weakening_step(Clause::from_dimacs(c), Clause::from_dimacs(d), {}, Clause(), id, n);
        CHECK(g.length == 2 * n + 1);
    }
}

TEST_CASE("weakening simulation on the smallest contradiction") {
    Cnf tau = F(1, {{1}, {-1}});
    ResolutionProof pi = *saturate(tau).proof;
    P0Proof p = p0w_simulate(pi, tau, VarOrder::identity(1));
    CHECK(check_p0(p, tau).ok);
    CHECK(p.first_empty() >= 0);
}

TEST_CASE("psim base case and unit literals") {
    Cnf two = F(1, {{1}, {-1}});
    P0Proof p = psim(*saturate(two).proof, two, VarOrder::identity(1));
    CHECK(check_p0(p, two).ok);
    CHECK(has_clause_line(p, C({1})));
    CHECK(has_clause_line(p, C({-1})));

    Cnf tau = F(2, {{1}, {-1, 2}, {-2}});
    ResolutionProof pi;
    pi.num_vars = 2;
    int a = pi.add_axiom(C({1})), b = pi.add_axiom(C({-1, 2})), c = pi.add_axiom(C({-2}));
    pi.add_resolution(pi.add_resolution(a, b, 1), c, 2);
    for (const VarOrder &o : {VarOrder::identity(2), VarOrder::from_sequence(2, {2, 1})}) {
        PsimReport rep;
        P0Proof q = psim(pi, tau, o, &rep);
        CHECK(check_p0(q, tau).ok);
        for (int lit : {1, -1, 2, -2}) CHECK(has_clause_line(q, C({lit})));
        CHECK(q.first_empty() >= 0);
        CHECK(rep.disjoint);
    }
}

TEST_CASE("all literals from a refutation") {
    Cnf two = F(1, {{1}, {-1}});
    ResolutionProof a = all_lits_from_refutation(*saturate(two).proof);
    CHECK(check_resolution(a, two).ok);

    Cnf ind = gen_induction(3);
    ResolutionProof pi = connected_core(*saturate(ind).proof).proof;
    ResolutionProof all = all_lits_from_refutation(pi);
    CHECK(check_resolution(all, ind).ok);
    int units = 0;
    for (int v = 1; v <= 3; ++v)
        for (int s : {v, -v})
            units += std::any_of(all.nodes.begin(), all.nodes.end(), [&](const ProofNode &nd) { return nd.clause == C({s}); });
    CHECK(units == 6);
}

TEST_CASE("finding an axiom with a literal") {
    Cnf two = F(1, {{1}, {-1}});
    CHECK(find_axiom_with_literal(*saturate(two).proof, 1, 0) == C({1}));
    Cnf ind = gen_induction(2);
    ResolutionProof pi = connected_core(*saturate(ind).proof).proof;
    CHECK(find_axiom_with_literal(pi, 2, 1) == C({-2}));
}

TEST_CASE("psim over random formulas and random orders") {
    std::mt19937_64 rng(5);
    for (const Cnf &tau : test::unsat_corpus(12, 3, 6, 900)) {
        ResolutionProof pi = connected_core(*saturate(tau).proof).proof;
        std::vector<int> seq(tau.num_vars());
        for (int i = 0; i < tau.num_vars(); ++i) seq[i] = i + 1;
        std::shuffle(seq.begin(), seq.end(), rng);
        VarOrder o = VarOrder::from_sequence(tau.num_vars(), seq);
        PsimReport rep;
        P0Proof p = psim(pi, tau, o, &rep);
        CHECK(check_p0(p, tau).ok);
        CHECK(p.first_empty() >= 0);
        for (int v : proof_vars(pi)) {
            CHECK(has_clause_line(p, C({v})));
            CHECK(has_clause_line(p, C({-v})));
        }
        CHECK(rep.disjoint);
    }
}

TEST_CASE("lifting prefixes every trail with x1 = 0") {
    // ψ = Ind on x2, x3; τ adds x1 to the first clause and holds ¬x1.
    Cnf psi = F(3, {{2}, {-2, 3}, {-3}});
    Cnf tau = F(3, {{1, 2}, {-2, 3}, {-3}, {-1}});
    VarOrder id = VarOrder::identity(3);
    VarOrder inner = id.without(1);
    P0Builder b(3, inner);
    int a = b.axiom(C({2})), bb = b.axiom(C({-2, 3})), c = b.axiom(C({-3}));
    int t = b.propagate(-1, 2, 1, a);
    int nx2 = b.learn(bb, c, b.decide(t, 3, 1));
    b.learn(a, nx2, t);
    P0Proof p = b.take();
    REQUIRE(check_p0(p, psi).ok);
    P0Proof l = lift(p, tau, id);
    CHECK(check_p0(l, tau).ok);
    for (const auto &line : l.lines)
        if (line.is_trail()) {
            REQUIRE_FALSE(line.trail.empty());
            CHECK(line.trail[0] == Assignment{1, 0, true});
        }
    CHECK(l.find_clause(C({1})).has_value());
}

TEST_CASE("induction chain") {
    for (int n = 2; n <= 8; ++n) {
        ResolutionProof c = ind_chain(n, VarOrder::identity(n));
        CHECK(resolutions(c) == n - 1);
        CHECK(c.clause(static_cast<int>(c.size()) - 1) == C({n}));
    }
}

TEST_CASE("explicit refutations check") {
    for (int n = 1; n <= 6; ++n) {
        P0Proof p = refute_ind_xor2(n, order_row_then_column(n, 2));
        CHECK(check_p0(p, xor_substitute(gen_induction(n), 2).first).ok);
        CHECK(p.first_empty() >= 0);
    }
    CHECK_THROWS_AS(refute_ind_xor2(3, VarOrder::identity(6)), std::invalid_argument);

    PointedGraph g{3, {{1, 3}, {2, 3}}, 3};
    StoneReport rep;
    P0Proof s = refute_stone(g, 3, &rep);
    CHECK(check_p0(s, gen_stone(g, 3)).ok);
    CHECK(s.first_empty() >= 0);
    CHECK(rep.stage3_not_half_ordered == 0);
}
