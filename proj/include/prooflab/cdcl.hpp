#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "prooflab/cnf.hpp"
#include "prooflab/resproof.hpp"

namespace pl {

struct Assignment {
    int var = 0;
    int val = 0;
    bool decision = true;  // false: unit propagation ("u")

    bool operator==(const Assignment &) const = default;
    auto operator<=>(const Assignment &) const = default;
};

using Trail = std::vector<Assignment>;

Restriction trail_restriction(const Trail &t, int n, std::size_t prefix);
inline Restriction trail_restriction(const Trail &t, int n) { return trail_restriction(t, n, t.size()); }
std::string trail_str(const Trail &t);

class CdclState {
public:
    CdclState() = default;
    explicit CdclState(const Cnf &tau);

    int num_vars() const { return n_; }
    const std::vector<Clause> &clauses() const { return cls_; }
    const Trail &trail() const { return trail_; }
    const Restriction &rho() const { return rho_; }
    bool contains(const Clause &c) const { return index_.count(c) > 0; }
    int clause_id(const Clause &c) const;  // 0-based position, -1 if absent

    bool terminal() const;
    bool has_conflict() const;
    bool has_unit() const;
    uint64_t digest() const;

    void push(const Assignment &a);
    void learn(const Clause &c, std::size_t keep);

private:
    int n_ = 0;
    std::vector<Clause> cls_;
    std::unordered_set<Clause, ClauseHash> index_;
    Trail trail_;
    Restriction rho_;
};

enum class ActionKind { Decision, Unit, Learn };

struct Action {
    ActionKind kind = ActionKind::Decision;
    int var = 0, val = 0;
    int reason = -1;      // unit: 0-based id of the justifying clause
    Clause clause;        // learn
    std::size_t keep = 0; // learn: retained prefix length

    static Action decide(int var, int val) { return {ActionKind::Decision, var, val, -1, {}, 0}; }
    static Action unit(int var, int val, int reason) { return {ActionKind::Unit, var, val, reason, {}, 0}; }
    static Action learn(Clause c, std::size_t keep) { return {ActionKind::Learn, 0, 0, -1, std::move(c), keep}; }
    std::string str() const;
};

struct Amendments {
    bool always_c = false, always_u = false, always_r = false, never_r = false;
    bool asserting_l = false, decision_l = false, first_l = false;
    std::optional<VarOrder> pi_d;
    std::optional<int> width;
    std::optional<int> space;

    // Comma separated: ALWAYS-C,ALWAYS-U,ALWAYS-R,NEVER-R,ASSERTING-L,DECISION-L,FIRST-L,π-D (or PI-D),WIDTH-w,SPACE-s.
    static Amendments parse(const std::string &spec, const std::optional<VarOrder> &order);
    std::string str() const;
};

struct LearningBudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LearningSets {
    // levels[k] = C_k(S) for k = 1..r+1; levels[0] unused
    std::vector<std::set<Clause>> levels;
    // clauses Res(C, D) with D an element of the current clause set (FIRST-L)
    std::set<Clause> first;
    std::set<Clause> all() const;  // union of levels 1..r
};

LearningSets learning_sets(const CdclState &s, long budget = 10000);

std::vector<Action> enumerate_decisions(const CdclState &s);
std::vector<Action> enumerate_units(const CdclState &s);
std::vector<Action> enumerate_learnings(const CdclState &s, long budget = 10000);
// Applies the amendments to Actions(S); learning candidates are shrunk before the (0,Λ) rule.
std::vector<Action> allowed_actions(const CdclState &s, const Amendments &am, long budget = 10000);
std::vector<Action> filter_actions(const CdclState &s, const std::vector<Action> &actions, const Amendments &am,
                                   long budget = 10000);

// Throws std::invalid_argument when A is not in Actions(S).
CdclState transition(const CdclState &s, const Action &a);

struct LearnWitness {
    int level = 0;                // j with D in C_j(S)
    Clause conflict;              // C_{k+1}
    std::vector<Clause> justify;  // C_1..C_k
    std::vector<int> positions;   // i_1 < ... < i_k, 1-based trail positions
    Clause recompose() const;
};

// D ∈ 𝕮(S) after the amendments' shrinking rules (no (0,Λ) or prefix checks).
bool learnable(const CdclState &s, const Clause &d, const Amendments &am);

// Backward search over justifying clauses; nullopt when D is in no C_k(S), 1 <= k <= r+1.
std::optional<LearnWitness> learned_clause_witness(const CdclState &s, const Clause &d);

struct RunTrace {
    Cnf initial;
    std::vector<Action> actions;
    std::vector<uint64_t> digests;  // digest of the state each action is taken in
    bool terminal = false;
};

using Policy = std::function<std::size_t(const CdclState &, const std::vector<Action> &, std::mt19937_64 &)>;
Policy policy_unit_first_lex();
Policy policy_random();
Policy policy_greedy_random();  // learn > unit > decision, uniform inside a class
Policy policy_scripted(std::vector<Action> script);
Policy policy_by_name(const std::string &name);

enum class RunOutcome { Success, Stuck, Budget, LearnOverflow };

struct RunResult {
    RunTrace trace;
    RunOutcome outcome = RunOutcome::Stuck;
    std::string detail;
};

RunResult run(const Cnf &tau, const Policy &policy, const Amendments &am, long step_budget, uint64_t seed,
              long learn_budget = 10000);

CheckReport verify_run(const RunTrace &trace, const Amendments &am);

RunTrace read_trace(std::istream &in, const Cnf &tau);
void write_trace(std::ostream &out, const RunTrace &trace);

}  // namespace pl
