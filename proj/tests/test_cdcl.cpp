#include <algorithm>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "prooflab/cdcl.hpp"

using namespace pl;
using pl::test::C;
using pl::test::F;

namespace {

// {x1∨x2, ¬x1∨x2, ¬x2} after deciding x1 = 0 and propagating x2 = 1.
CdclState running_example() {
    CdclState s(F(2, {{1, 2}, {-1, 2}, {-2}}));
    s = transition(s, Action::decide(1, 0));
    s = transition(s, Action::unit(2, 1, s.clause_id(C({1, 2}))));
    return s;
}

bool has_learn(const std::vector<Action> &acts, const Clause &c, std::size_t keep) {
    return std::any_of(acts.begin(), acts.end(), [&](const Action &a) {
        return a.kind == ActionKind::Learn && a.clause == c && a.keep == keep;
    });
}

}  // namespace

TEST_CASE("decisions and unit propagations") {
    CdclState s(F(2, {{1, 2}}));
    CHECK(enumerate_decisions(s).size() == 4);
    CdclState t = transition(s, Action::decide(1, 0));
    auto units = enumerate_units(t);
    REQUIRE(units.size() == 1);
    CHECK(units[0].var == 2);
    CHECK(units[0].val == 1);

    CdclState both = transition(CdclState(F(2, {{1, 2}, {1, -2}})), Action::decide(1, 0));
    auto u2 = enumerate_units(both);
    CHECK(u2.size() == 2);
    // a unit literal can be decided as well
    auto d2 = enumerate_decisions(both);
    CHECK(std::any_of(d2.begin(), d2.end(), [](const Action &a) { return a.var == 2 && a.val == 1; }));
}

TEST_CASE("pi-D keeps only the smallest unassigned variable") {
    VarOrder o = VarOrder::from_sequence(3, {3, 1, 2});
    CdclState s(F(3, {{1, 2, 3}}));
    Amendments am = Amendments::parse("PI-D", o);
    auto acts = allowed_actions(s, am);
    REQUIRE(acts.size() == 2);
    for (const auto &a : acts) CHECK(a.var == 3);
}

TEST_CASE("learning on the running example") {
    CdclState s = running_example();
    CHECK(s.has_conflict());
    auto learns = enumerate_learnings(s);
    REQUIRE(learns.size() == 1);
    CHECK(learns[0].clause == C({1}));
    CHECK(learns[0].keep == 0);

    CdclState after = transition(s, learns[0]);
    CHECK(after.trail().empty());
    CHECK(after.clauses().size() == 4);
    CHECK(after.contains(C({1})));

    Amendments first = Amendments::parse("FIRST-L", std::nullopt);
    CHECK(has_learn(filter_actions(s, learns, first), C({1}), 0));
}

TEST_CASE("learned clause witness") {
    CdclState s = running_example();
    auto w = learned_clause_witness(s, C({1}));
    REQUIRE(w);
    CHECK(w->conflict == C({-2}));
    REQUIRE(w->justify.size() == 1);
    CHECK(w->justify[0] == C({1, 2}));
    CHECK(w->positions.front() == 2);
    CHECK(w->recompose() == C({1}));

    auto base = learned_clause_witness(s, C({-2}));
    REQUIRE(base);
    CHECK(base->justify.empty());
    CHECK_FALSE(learned_clause_witness(s, C({-1})));
}

TEST_CASE("learning sets without a conflict are empty") {
    CdclState s(F(2, {{1, 2}}));
    LearningSets ls = learning_sets(s);
    CHECK(ls.all().empty());
    CHECK(enumerate_learnings(s).empty());
}

TEST_CASE("the empty clause learns with the empty trail") {
    CdclState s(F(1, {{1}, {-1}}));
    s = transition(s, Action::unit(1, 1, s.clause_id(C({1}))));
    auto learns = enumerate_learnings(s);
    CHECK(has_learn(learns, Clause(), 0));
}

TEST_CASE("restart amendments") {
    // x1 d=0, x2 d=0, x3 u=1 from x1∨x2∨x3, conflict on ¬x3∨x2.
    CdclState s(F(3, {{1, 2, 3}, {-3, 2}}));
    s = transition(s, Action::decide(1, 0));
    s = transition(s, Action::decide(2, 0));
    s = transition(s, Action::unit(3, 1, s.clause_id(C({1, 2, 3}))));
    auto all = enumerate_learnings(s);
    REQUIRE(has_learn(all, C({1, 2}), 0));
    REQUIRE(has_learn(all, C({1, 2}), 1));
    auto always = filter_actions(s, all, Amendments::parse("ALWAYS-R", std::nullopt));
    for (const auto &a : always)
        if (a.kind == ActionKind::Learn) CHECK(a.keep == 0);
    auto never = filter_actions(s, all, Amendments::parse("NEVER-R", std::nullopt));
    CHECK(has_learn(never, C({1, 2}), 1));
    CHECK_FALSE(has_learn(never, C({1, 2}), 0));
}

TEST_CASE("conflicts force learning under ALWAYS-C") {
    CdclState s = running_example();
    auto acts = allowed_actions(s, Amendments::parse("ALWAYS-C", std::nullopt));
    REQUIRE_FALSE(acts.empty());
    for (const auto &a : acts) CHECK(a.kind == ActionKind::Learn);
}

TEST_CASE("WIDTH-1 filters out wide learned clauses") {
    CdclState s(F(3, {{1, 2, 3}, {-3, 2}}));
    s = transition(s, Action::decide(1, 0));
    s = transition(s, Action::decide(2, 0));
    s = transition(s, Action::unit(3, 1, s.clause_id(C({1, 2, 3}))));
    auto acts = allowed_actions(s, Amendments::parse("WIDTH-1", std::nullopt));
    for (const auto &a : acts) CHECK(a.kind != ActionKind::Learn);
}

TEST_CASE("transition rejects actions outside the action set") {
    CdclState s(F(2, {{1, 2}}));
    CHECK_THROWS_AS(transition(s, Action::unit(2, 1, 0)), std::invalid_argument);
    CHECK_THROWS_AS(transition(s, Action::learn(C({1}), 0)), std::invalid_argument);
}

TEST_CASE("runs") {
    RunResult r = run(F(1, {{1}, {-1}}), policy_unit_first_lex(), {}, 100, 1);
    CHECK(r.outcome == RunOutcome::Success);
    CHECK(r.trace.actions.size() == 2);
    CHECK(r.trace.actions.back().kind == ActionKind::Learn);
    CHECK(r.trace.actions.back().clause.empty());

    RunResult sat = run(F(1, {{1}}), policy_random(), {}, 100, 1);
    CHECK(sat.outcome == RunOutcome::Success);
    CHECK(sat.trace.terminal);

    VarOrder id = VarOrder::identity(5);
    Amendments am = Amendments::parse("PI-D,DECISION-L", id);
    RunResult ind = run(gen_induction(5), policy_greedy_random(), am, 10000, 4);
    REQUIRE(ind.outcome == RunOutcome::Success);
    CHECK(verify_run(ind.trace, am).ok);
}

TEST_CASE("verify_run finds the first offending step") {
    VarOrder id = VarOrder::identity(5);
    Amendments am = Amendments::parse("PI-D,DECISION-L", id);
    for (uint64_t seed = 1; seed <= 20; ++seed) {
        Cnf tau = gen_random_kcnf(5, 30, 3, seed);
        RunResult r = run(tau, policy_greedy_random(), am, 10000, seed);
        REQUIRE(verify_run(r.trace, am).ok);
        for (std::size_t i = 0; i < r.trace.actions.size(); ++i) {
            if (r.trace.actions[i].kind != ActionKind::Decision) continue;
            RunTrace bad = r.trace;
            bad.actions[i].var = id.var_at(id.size());
            if (bad.actions[i].var == r.trace.actions[i].var) continue;
            CheckReport c = verify_run(bad, am);
            CHECK_FALSE(c.ok);
            CHECK(c.where == static_cast<long>(i) + 1);
            break;
        }
    }
}

TEST_CASE("a learned clause outside the first level breaks DECISION-L") {
    // Two chained propagations; ¬x2 resolves against only the second reason, so
    // it still holds a propagated variable.
    Cnf tau = F(3, {{1, 2}, {-2, 3}, {-3}});
    VarOrder id = VarOrder::identity(3);
    CdclState s(tau);
    RunTrace t;
    t.initial = tau;
    std::vector<Action> acts = {Action::decide(1, 0), Action::unit(2, 1, s.clause_id(C({1, 2})))};
    for (const auto &a : acts) {
        t.digests.push_back(s.digest());
        t.actions.push_back(a);
        s = transition(s, a);
    }
    Action u3 = Action::unit(3, 1, s.clause_id(C({-2, 3})));
    t.digests.push_back(s.digest());
    t.actions.push_back(u3);
    s = transition(s, u3);
    Action learn = Action::learn(C({-2}), 0);
    t.digests.push_back(s.digest());
    t.actions.push_back(learn);
    CHECK(verify_run(t, Amendments::parse("", id)).ok);
    CheckReport c = verify_run(t, Amendments::parse("DECISION-L", id));
    CHECK_FALSE(c.ok);
    CHECK(c.where == 4);
}

TEST_CASE("trace files round trip") {
    VarOrder id = VarOrder::identity(6);
    Amendments am = Amendments::parse("PI-D,DECISION-L", id);
    Cnf tau = gen_induction(6);
    RunResult r = run(tau, policy_greedy_random(), am, 10000, 9);
    std::stringstream ss;
    write_trace(ss, r.trace);
    RunTrace back = read_trace(ss, tau);
    REQUIRE(back.actions.size() == r.trace.actions.size());
    for (std::size_t i = 0; i < back.actions.size(); ++i) CHECK(back.actions[i].str() == r.trace.actions[i].str());
    CHECK(verify_run(back, am).ok);
}

TEST_CASE("amendment parsing") {
    CHECK_THROWS_AS(Amendments::parse("NOPE", std::nullopt), std::invalid_argument);
    CHECK_THROWS_AS(Amendments::parse("PI-D", std::nullopt), std::invalid_argument);
    Amendments a = Amendments::parse("width-3, FIRST-L", std::nullopt);
    CHECK(a.width == 3);
    CHECK(a.first_l);
}
