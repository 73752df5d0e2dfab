#include <random>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "prooflab/oracle.hpp"
#include "prooflab/resproof.hpp"

using namespace pl;
using pl::test::C;
using pl::test::F;

namespace {

ResolutionProof tiny() {
    ResolutionProof pi;
    pi.num_vars = 1;
    int a = pi.add_axiom(C({1}));
    int b = pi.add_axiom(C({-1}));
    pi.add_resolution(a, b, 1);
    return pi;
}

ResolutionProof single_step(const Clause &a, const Clause &b, int pivot, int n) {
    ResolutionProof pi;
    pi.num_vars = n;
    pi.add_resolution(pi.add_axiom(a), pi.add_axiom(b), pivot);
    return pi;
}

}  // namespace

TEST_CASE("checker on the two-line contradiction") {
    Cnf tau = F(1, {{1}, {-1}});
    ResolutionProof pi = tiny();
    CheckReport r = check_resolution(pi, tau);
    CHECK(r.ok);
    CHECK(r.size == 3);
    CHECK(r.width == 1);
    CHECK(proof_size(pi) == 3);
    CHECK(proof_width(pi) == 1);

    pi.nodes[2].pivot = 2;
    CheckReport bad = check_resolution(pi, tau);
    CHECK_FALSE(bad.ok);
    CHECK(bad.where == 3);
    CHECK(bad.code == "pivot-mismatch");
}

TEST_CASE("axiom outside the formula is rejected") {
    ResolutionProof pi = tiny();
    CHECK_FALSE(check_resolution(pi, F(2, {{1, 2}, {-1}})).ok);
}

TEST_CASE("ordered and half-ordered steps") {
    VarOrder id = VarOrder::identity(3);
    auto p1 = single_step(C({1, 2}), C({-2}), 2, 3);
    CHECK(check_ordered(p1, id).ok);
    CHECK(check_half_ordered(p1, id).ok);
    auto p2 = single_step(C({1, 3}), C({-1, 2}), 1, 3);
    CHECK_FALSE(check_ordered(p2, id).ok);
    CHECK_FALSE(check_half_ordered(p2, id).ok);
    auto p3 = single_step(C({1, 2}), C({-2, 3}), 2, 3);
    CHECK_FALSE(check_ordered(p3, id).ok);
    CHECK(check_half_ordered(p3, id).ok);
}

TEST_CASE("oracle refutations of induction formulas check") {
    for (int n = 1; n <= 8; ++n) {
        auto s = saturate(gen_induction(n));
        REQUIRE(s.proof);
        CHECK(check_resolution(*s.proof, gen_induction(n)).ok);
        CHECK(s.proof->first_empty() >= 0);
        if (n >= 2) CHECK(proof_width(*s.proof) == 2);
    }
    auto s5 = saturate(gen_induction(5));
    CHECK(s5.proof->size() <= 11);
}

TEST_CASE("closures and completeness") {
    ResolutionProof pi = connected_core(*saturate(gen_induction(4)).proof).proof;
    NodeSet sink = singleton(pi, pi.first_empty());
    NodeSet d = dcl(pi, sink);
    CHECK(std::count(d.begin(), d.end(), 1) == static_cast<long>(pi.size()));
    NodeSet axioms(pi.size(), 0);
    for (std::size_t v = 0; v < pi.size(); ++v) axioms[v] = pi.nodes[v].rule == Rule::Axiom;
    NodeSet u = ucl(pi, axioms);
    CHECK(std::count(u.begin(), u.end(), 1) == static_cast<long>(pi.size()));
    NodeSet all(pi.size(), 1);
    CHECK(is_parent_complete(pi, all));
    CHECK(is_path_complete(pi, all));
    for (std::size_t v = 0; v < pi.size(); ++v)
        if (pi.nodes[v].rule == Rule::Resolution) {
            NodeSet s(pi.size(), 0);
            s[v] = 1;
            s[pi.nodes[v].p1] = 1;
            CHECK_FALSE(is_parent_complete(pi, s));
            break;
        }
}

TEST_CASE("downward closures are parent and path complete") {
    auto corpus = test::unsat_corpus(10, 4, 7, 100);
    std::mt19937_64 rng(7);
    int trials = 0;
    for (const Cnf &tau : corpus) {
        ResolutionProof pi = *saturate(tau).proof;
        for (int rep = 0; rep < 10; ++rep, ++trials) {
            NodeSet s(pi.size(), 0);
            s[rng() % pi.size()] = 1;
            s[rng() % pi.size()] = 1;
            NodeSet d = dcl(pi, s);
            CHECK(is_parent_complete(pi, d));
            CHECK(is_path_complete(pi, d));
            CHECK_FALSE(min_nodes(pi, d).empty());
            CHECK_FALSE(max_nodes(pi, d).empty());
        }
    }
    CHECK(trials == 100);
}

TEST_CASE("connected core drops dead branches") {
    ResolutionProof pi = tiny();
    MappedProof same = connected_core(pi);
    CHECK(same.proof.size() == pi.size());
    ResolutionProof junk;
    junk.num_vars = 2;
    int a = junk.add_axiom(C({1, 2}));
    int b = junk.add_axiom(C({-2}));
    int c = junk.add_axiom(C({-1}));
    junk.add_resolution(a, b, 2);
    int e = junk.add_resolution(a, c, 1);
    junk.add_resolution(e, b, 2);
    MappedProof core = connected_core(junk);
    CHECK(core.proof.size() < junk.size());
    CHECK(check_resolution(core.proof, F(2, {{1, 2}, {-2}, {-1}})).ok);
    CHECK(is_connected_refutation(core.proof));
}

TEST_CASE("restricting a proof") {
    Cnf tau = F(2, {{1}, {-1, 2}, {-2}});
    ResolutionProof pi;
    pi.num_vars = 2;
    int a = pi.add_axiom(C({1})), b = pi.add_axiom(C({-1, 2})), c = pi.add_axiom(C({-2}));
    int d = pi.add_resolution(a, b, 1);
    pi.add_resolution(d, c, 2);
    Restriction rho(2);
    rho.set(1, 0);
    MappedProof r = restrict_proof(pi, rho);
    MappedProof core = connected_core(r.proof);
    CHECK(core.proof.size() == 1);
    CHECK(core.proof.nodes[0].clause.empty());

    MappedProof same = restrict_proof(pi, Restriction(2));
    CHECK(same.proof.size() == pi.size());
}

TEST_CASE("restriction keeps half-ordered proofs half-ordered and no bigger") {
    std::mt19937_64 rng(3);
    for (int n = 3; n <= 7; ++n) {
        VarOrder id = VarOrder::identity(n);
        ResolutionProof pi = *saturate(gen_induction(n)).proof;
        REQUIRE(check_half_ordered(pi, id).ok);
        for (int rep = 0; rep < 20; ++rep) {
            Restriction rho(n);
            for (int v = 1; v <= n; ++v)
                if (rng() % 3 == 0) rho.set(v, static_cast<int>(rng() & 1));
            MappedProof r = restrict_proof(pi, rho);
            CHECK(r.proof.size() <= pi.size());
            CHECK(check_half_ordered(r.proof, id).ok);
        }
    }
}

TEST_CASE("contracting weakenings") {
    ResolutionProof pi = tiny();
    MappedProof same = contract_weakenings(pi);
    CHECK(same.proof.size() == pi.size());
    for (std::size_t v = 0; v < pi.size(); ++v) CHECK(same.map[v] == static_cast<int>(v));

    ResolutionProof w;
    w.num_vars = 3;
    w.allow_weakening = true;
    int a = w.add_axiom(C({1}));
    int w1 = w.add_weakening(a, C({1, 2}));
    int w2 = w.add_weakening(w1, C({1, 2, 3}));
    int b = w.add_axiom(C({-1}));
    w.add_resolution(w2, b, 1);
    MappedProof c = contract_weakenings(w);
    for (const auto &node : c.proof.nodes) CHECK(node.rule != Rule::Weakening);
    CHECK(c.proof.clause(c.proof.first_empty()).empty());
}

TEST_CASE("proof files round trip") {
    ResolutionProof pi = *saturate(gen_induction(6)).proof;
    std::stringstream ss;
    write_proof(ss, pi);
    ResolutionProof back = read_proof(ss);
    REQUIRE(back.size() == pi.size());
    for (std::size_t v = 0; v < pi.size(); ++v) {
        CHECK(back.nodes[v].clause == pi.nodes[v].clause);
        CHECK(back.nodes[v].p1 == pi.nodes[v].p1);
        CHECK(back.nodes[v].pivot == pi.nodes[v].pivot);
    }
}
