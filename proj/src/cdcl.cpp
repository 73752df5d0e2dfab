#include "prooflab/cdcl.hpp"

#include <algorithm>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>

namespace pl {

Restriction trail_restriction(const Trail &t, int n, std::size_t prefix) {
    Restriction rho(n);
    for (std::size_t i = 0; i < prefix && i < t.size(); ++i) rho.set(t[i].var, t[i].val);
    return rho;
}

std::string trail_str(const Trail &t) {
    std::string s = "[";
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) s += ", ";
        s += "x" + std::to_string(t[i].var) + (t[i].decision ? " d=" : " u=") + std::to_string(t[i].val);
    }
    return s + "]";
}

CdclState::CdclState(const Cnf &tau) : n_(tau.num_vars()), cls_(tau.clauses()), rho_(tau.num_vars()) {
    for (const Clause &c : cls_) index_.insert(c);
}

int CdclState::clause_id(const Clause &c) const {
    if (!contains(c)) return -1;
    for (std::size_t i = 0; i < cls_.size(); ++i)
        if (cls_[i] == c) return static_cast<int>(i);
    return -1;
}

bool CdclState::terminal() const {
    if (contains(Clause())) return true;
    for (const Clause &c : cls_)
        if (!satisfied(c, rho_)) return false;
    return true;
}

bool CdclState::has_conflict() const {
    for (const Clause &c : cls_)
        if (falsified(c, rho_)) return true;
    return false;
}

bool CdclState::has_unit() const {
    for (const Clause &c : cls_) {
        auto r = restrict_clause(c, rho_);
        if (r && r->width() == 1) return true;
    }
    return false;
}

uint64_t CdclState::digest() const {
    std::vector<Clause> sorted = cls_;
    std::sort(sorted.begin(), sorted.end());
    uint64_t h = 1469598103934665603ull;
    auto mix = [&](uint64_t x) {
        h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        h *= 1099511628211ull;
    };
    for (const Clause &c : sorted) {
        for (Lit l : c.lits()) mix(static_cast<uint64_t>(l.code));
        mix(0xffff);
    }
    for (const auto &a : trail_) mix((static_cast<uint64_t>(a.var) << 2) | (a.val << 1) | (a.decision ? 1 : 0));
    return h;
}

void CdclState::push(const Assignment &a) {
    rho_.set(a.var, a.val);
    trail_.push_back(a);
}

void CdclState::learn(const Clause &c, std::size_t keep) {
    if (index_.insert(c).second) cls_.push_back(c);
    trail_.resize(keep);
    rho_ = trail_restriction(trail_, n_);
}

std::string Action::str() const {
    switch (kind) {
    case ActionKind::Decision: return "x" + std::to_string(var) + " d=" + std::to_string(val);
    case ActionKind::Unit: return "x" + std::to_string(var) + " u=" + std::to_string(val);
    case ActionKind::Learn: return "learn (" + clause.str() + ") keep " + std::to_string(keep);
    }
    return {};
}

Amendments Amendments::parse(const std::string &spec, const std::optional<VarOrder> &order) {
    Amendments am;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok.erase(0, tok.find_first_not_of(' '));
        tok.erase(tok.find_last_not_of(' ') + 1);
        std::string up;
        for (char ch : tok) up += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
        if (up.empty()) continue;
        if (up == "ALWAYS-C") am.always_c = true;
        else if (up == "ALWAYS-U") am.always_u = true;
        else if (up == "ALWAYS-R") am.always_r = true;
        else if (up == "NEVER-R") am.never_r = true;
        else if (up == "ASSERTING-L") am.asserting_l = true;
        else if (up == "DECISION-L") am.decision_l = true;
        else if (up == "FIRST-L") am.first_l = true;
        else if (up == "PI-D" || tok == "π-D" || up == "P-D") {
            if (!order) throw std::invalid_argument("π-D needs an order");
            am.pi_d = *order;
        } else if (up.rfind("WIDTH-", 0) == 0) am.width = std::stoi(up.substr(6));
        else if (up.rfind("SPACE-", 0) == 0) am.space = std::stoi(up.substr(6));
        else throw std::invalid_argument("unknown amendment '" + tok + "'");
    }
    return am;
}

std::string Amendments::str() const {
    std::vector<std::string> v;
    if (always_c) v.push_back("ALWAYS-C");
    if (always_u) v.push_back("ALWAYS-U");
    if (always_r) v.push_back("ALWAYS-R");
    if (never_r) v.push_back("NEVER-R");
    if (asserting_l) v.push_back("ASSERTING-L");
    if (decision_l) v.push_back("DECISION-L");
    if (first_l) v.push_back("FIRST-L");
    if (pi_d) v.push_back("PI-D");
    if (width) v.push_back("WIDTH-" + std::to_string(*width));
    if (space) v.push_back("SPACE-" + std::to_string(*space));
    std::string s;
    for (auto &x : v) s += (s.empty() ? "" : ",") + x;
    return s;
}

std::set<Clause> LearningSets::all() const {
    std::set<Clause> u;
    for (std::size_t k = 1; k + 1 < levels.size(); ++k) u.insert(levels[k].begin(), levels[k].end());
    return u;
}

namespace {

// Clauses C of the state with C|_{t[<=k-1]} = x^a for the unit at 1-based position k.
std::vector<int> justifying(const CdclState &s, std::size_t k, const Restriction &before) {
    const Assignment &a = s.trail()[k - 1];
    Lit want = Lit::make(a.var, a.val);
    std::vector<int> out;
    for (std::size_t i = 0; i < s.clauses().size(); ++i) {
        const Clause &c = s.clauses()[i];
        if (!c.contains(want)) continue;
        bool ok = true;
        for (Lit l : c.lits())
            if (l != want && !before.falsifies(l)) {
                ok = false;
                break;
            }
        if (ok) out.push_back(static_cast<int>(i));
    }
    std::sort(out.begin(), out.end(), [&](int x, int y) { return s.clauses()[x] < s.clauses()[y]; });
    return out;
}

std::vector<std::vector<int>> all_justifying(const CdclState &s) {
    std::vector<std::vector<int>> J(s.trail().size() + 2);
    Restriction before(s.num_vars());
    for (std::size_t k = 1; k <= s.trail().size(); ++k) {
        const Assignment &a = s.trail()[k - 1];
        if (!a.decision) J[k] = justifying(s, k, before);
        before.set(a.var, a.val);
    }
    return J;
}

int last_decision(const Trail &t) {
    for (std::size_t k = t.size(); k >= 1; --k)
        if (t[k - 1].decision) return static_cast<int>(k);
    return 0;
}

}  // namespace

LearningSets learning_sets(const CdclState &s, long budget) {
    const Trail &t = s.trail();
    std::size_t r = t.size();
    LearningSets L;
    L.levels.resize(r + 2);
    const Restriction &full = s.rho();
    for (const Clause &c : s.clauses())
        if (falsified(c, full)) L.levels[r + 1].insert(c);
    auto J = all_justifying(s);
    long total = static_cast<long>(L.levels[r + 1].size());
    for (std::size_t k = r; k >= 1; --k) {
        const Assignment &a = t[k - 1];
        if (a.decision) {
            L.levels[k] = L.levels[k + 1];
        } else {
            Lit comp = Lit::make(a.var, 1 - a.val);
            for (const Clause &d : L.levels[k + 1]) {
                if (!d.contains(comp)) {
                    L.levels[k].insert(d);
                    continue;
                }
                for (int cid : J[k]) {
                    auto res = resolve(s.clauses()[cid], d, a.var);
                    if (!res) throw std::logic_error("learning: premises clash outside the pivot");
                    if (!falsified(*res, full)) throw std::logic_error("learning: produced clause not falsified by t");
                    if (s.contains(d)) L.first.insert(*res);
                    L.levels[k].insert(std::move(*res));
                }
            }
        }
        total += static_cast<long>(L.levels[k].size());
        if (total > budget) throw LearningBudgetExceeded("learning sets exceed budget " + std::to_string(budget));
    }
    return L;
}

std::vector<Action> enumerate_decisions(const CdclState &s) {
    std::vector<Action> out;
    for (int v = 1; v <= s.num_vars(); ++v)
        if (!s.rho().assigned(v))
            for (int a : {0, 1}) out.push_back(Action::decide(v, a));
    return out;
}

std::vector<Action> enumerate_units(const CdclState &s) {
    std::map<std::pair<int, int>, int> found;
    for (std::size_t i = 0; i < s.clauses().size(); ++i) {
        auto r = restrict_clause(s.clauses()[i], s.rho());
        if (r && r->width() == 1) {
            Lit l = r->lits()[0];
            found.emplace(std::make_pair(l.var(), l.sign()), static_cast<int>(i));
        }
    }
    std::vector<Action> out;
    for (auto [k, id] : found) out.push_back(Action::unit(k.first, k.second, id));
    return out;
}

namespace {

std::vector<Action> learn_actions(const CdclState &s, const std::set<Clause> &cands, const Amendments *am) {
    std::vector<Action> out;
    if (cands.count(Clause())) {
        out.push_back(Action::learn(Clause(), 0));
        return out;
    }
    const Trail &t = s.trail();
    for (const Clause &c : cands) {
        // C|_{t[<=p]} != 0 holds exactly for p below the point where its last literal is falsified
        std::size_t limit = 0;
        Restriction rho(s.num_vars());
        for (std::size_t p = 0; p <= t.size(); ++p) {
            if (p > 0) rho.set(t[p - 1].var, t[p - 1].val);
            if (falsified(c, rho)) break;
            limit = p;
        }
        if (am && am->always_r) {
            out.push_back(Action::learn(c, 0));
        } else if (am && am->never_r) {
            out.push_back(Action::learn(c, limit));
        } else {
            for (std::size_t p = 0; p <= limit; ++p) out.push_back(Action::learn(c, p));
        }
    }
    return out;
}

std::set<Clause> shrunk_candidates(const CdclState &s, const LearningSets &L, const Amendments &am) {
    std::set<Clause> base;
    std::size_t r = s.trail().size();
    std::size_t hi = r;
    if (am.asserting_l) {
        int d = last_decision(s.trail());
        if (d > 0) hi = static_cast<std::size_t>(d);
    }
    std::size_t lo_hi = am.decision_l ? 1 : hi;
    for (std::size_t k = 1; k <= std::min(hi, lo_hi); ++k)
        for (const Clause &c : L.levels[k])
            if (!s.contains(c)) base.insert(c);
    std::set<Clause> out;
    for (const Clause &c : base) {
        if (am.first_l && !L.first.count(c)) continue;
        if (am.width && static_cast<int>(c.width()) > *am.width) continue;
        out.insert(c);
    }
    return out;
}

}  // namespace

std::vector<Action> enumerate_learnings(const CdclState &s, long budget) {
    LearningSets L = learning_sets(s, budget);
    std::set<Clause> cands;
    for (const Clause &c : L.all())
        if (!s.contains(c)) cands.insert(c);
    return learn_actions(s, cands, nullptr);
}

std::vector<Action> filter_actions(const CdclState &s, const std::vector<Action> &actions, const Amendments &am,
                                   long budget) {
    bool conflict = s.has_conflict();
    bool unit = s.has_unit();
    int pid = am.pi_d ? am.pi_d->first_unassigned(s.rho()) : 0;
    bool any_learn = std::any_of(actions.begin(), actions.end(), [](const Action &a) { return a.kind == ActionKind::Learn; });
    std::set<Clause> allowed_learn;
    std::set<std::pair<Clause, std::size_t>> allowed_pairs;
    if (any_learn && !(am.space && static_cast<int>(s.clauses().size()) >= *am.space)) {
        LearningSets L = learning_sets(s, budget);
        for (const Action &a : learn_actions(s, shrunk_candidates(s, L, am), &am))
            allowed_pairs.insert({a.clause, a.keep});
    }
    std::vector<Action> out;
    for (const Action &a : actions) {
        switch (a.kind) {
        case ActionKind::Decision:
            if (am.always_c && conflict) continue;
            if (am.always_u && unit) continue;
            if (am.pi_d && a.var != pid) continue;
            break;
        case ActionKind::Unit:
            if (am.always_c && conflict) continue;
            break;
        case ActionKind::Learn:
            if (!allowed_pairs.count({a.clause, a.keep})) continue;
            break;
        }
        out.push_back(a);
    }
    return out;
}

std::vector<Action> allowed_actions(const CdclState &s, const Amendments &am, long budget) {
    if (s.terminal()) return {};
    bool conflict = s.has_conflict();
    bool unit = s.has_unit();
    std::vector<Action> out;
    if (!(am.always_c && conflict)) {
        for (auto &a : enumerate_units(s)) out.push_back(a);
        if (!(am.always_u && unit)) {
            if (am.pi_d) {
                int v = am.pi_d->first_unassigned(s.rho());
                if (v)
                    for (int val : {0, 1}) out.push_back(Action::decide(v, val));
            } else {
                for (auto &a : enumerate_decisions(s)) out.push_back(a);
            }
        }
    }
    if (conflict && !(am.space && static_cast<int>(s.clauses().size()) >= *am.space)) {
        LearningSets L = learning_sets(s, budget);
        for (auto &a : learn_actions(s, shrunk_candidates(s, L, am), &am)) out.push_back(a);
    }
    return out;
}

CdclState transition(const CdclState &s, const Action &a) {
    if (s.terminal()) throw std::invalid_argument("transition from a terminal state");
    CdclState next = s;
    switch (a.kind) {
    case ActionKind::Decision:
        if (a.var < 1 || a.var > s.num_vars() || s.rho().assigned(a.var))
            throw std::invalid_argument("decision on an assigned or unknown variable");
        next.push({a.var, a.val, true});
        break;
    case ActionKind::Unit: {
        if (a.reason < 0 || a.reason >= static_cast<int>(s.clauses().size()))
            throw std::invalid_argument("unit propagation without a valid clause id");
        auto r = restrict_clause(s.clauses()[a.reason], s.rho());
        if (!r || r->width() != 1 || r->lits()[0] != Lit::make(a.var, a.val))
            throw std::invalid_argument("clause " + std::to_string(a.reason + 1) + " is not the unit x" +
                                        std::to_string(a.var) + "^" + std::to_string(a.val));
        next.push({a.var, a.val, false});
        break;
    }
    case ActionKind::Learn: {
        auto w = learned_clause_witness(s, a.clause);
        if (!w || w->level > static_cast<int>(s.trail().size()) || s.contains(a.clause))
            throw std::invalid_argument("clause is not learnable in this state");
        if (a.keep > s.trail().size()) throw std::invalid_argument("retained prefix longer than the trail");
        if (!a.clause.empty() && falsified(a.clause, trail_restriction(s.trail(), s.num_vars(), a.keep)))
            throw std::invalid_argument("learned clause falsified by the retained prefix");
        if (a.clause.empty() && a.keep != 0) throw std::invalid_argument("(0, t*) needs t* = Λ");
        next.learn(a.clause, a.keep);
        break;
    }
    }
    return next;
}

// ---- witness search ----

namespace {

class WitnessSearch {
public:
    explicit WitnessSearch(const CdclState &s) : s_(s), r_(static_cast<int>(s.trail().size())) {
        J_ = all_justifying(s);
    }

    // D in C_k(S)
    bool in(const Clause &d, int k) {
        if (!falsified(d, s_.rho())) return false;
        if (k == r_ + 1) return s_.contains(d);
        auto key = std::make_pair(k, d);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        memo_[key] = false;
        bool ok = false;
        Step st;
        const Assignment &a = s_.trail()[k - 1];
        if (a.decision) {
            ok = in(d, k + 1);
            st.pass = true;
        } else if (!d.has_var(a.var)) {
            if (in(d, k + 1)) {
                ok = true;
                st.pass = true;
            } else {
                for (int cid : J_[k]) {
                    for (const Clause &dp : premises(d, s_.clauses()[cid], a)) {
                        if (in(dp, k + 1)) {
                            ok = true;
                            st = {false, cid, dp};
                            break;
                        }
                    }
                    if (ok) break;
                }
            }
        }
        memo_[key] = ok;
        if (ok) steps_[key] = st;
        return ok;
    }

    // Candidates D' with Res(C, D') = D on a.var, smallest first.
    static std::vector<Clause> premises(const Clause &d, const Clause &c, const Assignment &a) {
        Clause cm = c.without_var(a.var);
        if (!cm.subset_of(d)) return {};
        std::vector<Lit> forced;
        for (Lit l : d.lits())
            if (!cm.contains(l)) forced.push_back(l);
        forced.push_back(Lit::make(a.var, 1 - a.val));
        const auto &opt = cm.lits();
        std::vector<Clause> out;
        if (opt.size() > 20) throw std::runtime_error("witness search: clause too wide");
        for (uint32_t mask = 0; mask < (1u << opt.size()); ++mask) {
            std::vector<Lit> v = forced;
            for (std::size_t i = 0; i < opt.size(); ++i)
                if (mask >> i & 1) v.push_back(opt[i]);
            out.emplace_back(std::move(v));
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    LearnWitness build(const Clause &d, int j) {
        LearnWitness w;
        w.level = j;
        Clause cur = d;
        for (int k = j; k <= r_; ++k) {
            const Step &st = steps_.at({k, cur});
            if (st.pass) continue;
            w.justify.push_back(s_.clauses()[st.cid]);
            w.positions.push_back(k);
            cur = st.dprime;
        }
        w.conflict = cur;
        return w;
    }

    const std::vector<std::vector<int>> &J() const { return J_; }
    int r() const { return r_; }

private:
    struct Step {
        bool pass = true;
        int cid = -1;
        Clause dprime;
    };
    const CdclState &s_;
    int r_;
    std::vector<std::vector<int>> J_;
    std::map<std::pair<int, Clause>, bool> memo_;
    std::map<std::pair<int, Clause>, Step> steps_;
};

bool first_producible(const CdclState &s, WitnessSearch &ws, const Clause &d) {
    const Trail &t = s.trail();
    for (int k = 1; k <= ws.r(); ++k) {
        const Assignment &a = t[k - 1];
        if (a.decision || d.has_var(a.var)) continue;
        for (int cid : ws.J()[k])
            for (const Clause &dp : WitnessSearch::premises(d, s.clauses()[cid], a))
                if (s.contains(dp) && ws.in(dp, k + 1)) return true;
    }
    return false;
}

bool learnable_under(const CdclState &s, WitnessSearch &ws, const Clause &d, const Amendments &am) {
    if (s.contains(d)) return false;
    if (am.width && static_cast<int>(d.width()) > *am.width) return false;
    int hi = ws.r();
    if (am.asserting_l) {
        int dpos = last_decision(s.trail());
        if (dpos > 0) hi = dpos;
    }
    if (am.decision_l) hi = std::min(hi, 1);
    bool found = false;
    for (int k = 1; k <= hi && !found; ++k) found = ws.in(d, k);
    if (!found) return false;
    if (am.first_l && !first_producible(s, ws, d)) return false;
    return true;
}

}  // namespace

Clause LearnWitness::recompose() const {
    Clause cur = conflict;
    for (std::size_t i = justify.size(); i-- > 0;) {
        // the pivot is the variable justify[i] propagated: its unique clash with cur
        auto x = unique_clash(cur, justify[i]);
        if (!x) throw std::logic_error("witness step is a null operator");
        cur = *resolve(cur, justify[i], *x);
    }
    return cur;
}

bool learnable(const CdclState &s, const Clause &d, const Amendments &am) {
    WitnessSearch ws(s);
    return learnable_under(s, ws, d, am);
}

std::optional<LearnWitness> learned_clause_witness(const CdclState &s, const Clause &d) {
    WitnessSearch ws(s);
    for (int j = 1; j <= ws.r() + 1; ++j)
        if (ws.in(d, j)) return ws.build(d, j);
    return std::nullopt;
}

// ---- runner ----

Policy policy_unit_first_lex() {
    return [](const CdclState &, const std::vector<Action> &acts, std::mt19937_64 &) -> std::size_t {
        std::size_t best = 0;
        auto cls = [](const Action &a) {
            return a.kind == ActionKind::Learn ? 0 : a.kind == ActionKind::Unit ? 1 : 2;
        };
        for (std::size_t i = 1; i < acts.size(); ++i) {
            const Action &a = acts[i], &b = acts[best];
            if (cls(a) != cls(b)) {
                if (cls(a) < cls(b)) best = i;
                continue;
            }
            if (a.kind == ActionKind::Learn) {
                // shortest clause, then canonical order, then the longest kept prefix
                if (std::make_tuple(a.clause.width(), a.clause, -static_cast<long>(a.keep)) <
                    std::make_tuple(b.clause.width(), b.clause, -static_cast<long>(b.keep)))
                    best = i;
            } else if (std::make_pair(a.var, a.val) < std::make_pair(b.var, b.val)) {
                best = i;
            }
        }
        return best;
    };
}

Policy policy_random() {
    return [](const CdclState &, const std::vector<Action> &acts, std::mt19937_64 &rng) -> std::size_t {
        return std::uniform_int_distribution<std::size_t>(0, acts.size() - 1)(rng);
    };
}

Policy policy_greedy_random() {
    return [](const CdclState &, const std::vector<Action> &acts, std::mt19937_64 &rng) -> std::size_t {
        for (ActionKind k : {ActionKind::Learn, ActionKind::Unit, ActionKind::Decision}) {
            std::vector<std::size_t> idx;
            for (std::size_t i = 0; i < acts.size(); ++i)
                if (acts[i].kind == k) idx.push_back(i);
            if (!idx.empty()) return idx[std::uniform_int_distribution<std::size_t>(0, idx.size() - 1)(rng)];
        }
        return 0;
    };
}

Policy policy_scripted(std::vector<Action> script) {
    auto pos = std::make_shared<std::size_t>(0);
    auto sc = std::make_shared<std::vector<Action>>(std::move(script));
    return [pos, sc](const CdclState &, const std::vector<Action> &acts, std::mt19937_64 &) -> std::size_t {
        if (*pos >= sc->size()) return acts.size();
        const Action &want = (*sc)[(*pos)++];
        for (std::size_t i = 0; i < acts.size(); ++i) {
            const Action &a = acts[i];
            if (a.kind != want.kind) continue;
            if (a.kind == ActionKind::Learn ? (a.clause == want.clause && a.keep == want.keep)
                                            : (a.var == want.var && a.val == want.val))
                return i;
        }
        return acts.size();
    };
}

Policy policy_by_name(const std::string &name) {
    if (name == "unit-first-lex") return policy_unit_first_lex();
    if (name == "random") return policy_random();
    if (name == "greedy-random") return policy_greedy_random();
    throw std::invalid_argument("unknown policy '" + name + "'");
}

RunResult run(const Cnf &tau, const Policy &policy, const Amendments &am, long step_budget, uint64_t seed,
              long learn_budget) {
    RunResult res;
    res.trace.initial = tau;
    std::mt19937_64 rng(seed);
    CdclState s(tau);
    for (long step = 0;; ++step) {
        if (s.terminal()) {
            res.trace.terminal = true;
            res.outcome = RunOutcome::Success;
            return res;
        }
        if (step >= step_budget) {
            res.outcome = RunOutcome::Budget;
            res.detail = "step budget exhausted";
            return res;
        }
        std::vector<Action> acts;
        try {
            acts = allowed_actions(s, am, learn_budget);
        } catch (const LearningBudgetExceeded &e) {
            res.outcome = RunOutcome::LearnOverflow;
            res.detail = e.what();
            return res;
        }
        if (acts.empty()) {
            res.outcome = RunOutcome::Stuck;
            res.detail = "no allowed action at a nonterminal state";
            return res;
        }
        std::size_t pick = policy(s, acts, rng);
        if (pick >= acts.size()) {
            res.outcome = RunOutcome::Stuck;
            res.detail = "policy undefined on this state";
            return res;
        }
        res.trace.digests.push_back(s.digest());
        res.trace.actions.push_back(acts[pick]);
        s = transition(s, acts[pick]);
    }
}

CheckReport verify_run(const RunTrace &trace, const Amendments &am) {
    CdclState s(trace.initial);
    for (std::size_t i = 0; i < trace.actions.size(); ++i) {
        const Action &a = trace.actions[i];
        long id = static_cast<long>(i) + 1;
        if (s.terminal()) return CheckReport::fail("action-after-terminal", id, a.str());
        bool conflict = s.has_conflict();
        switch (a.kind) {
        case ActionKind::Decision:
            if (a.var < 1 || a.var > s.num_vars() || s.rho().assigned(a.var))
                return CheckReport::fail("bad-decision", id, a.str());
            if (am.always_c && conflict) return CheckReport::fail("ALWAYS-C", id, "decision during a conflict");
            if (am.always_u && s.has_unit()) return CheckReport::fail("ALWAYS-U", id, "decision with a unit pending");
            if (am.pi_d && am.pi_d->first_unassigned(s.rho()) != a.var)
                return CheckReport::fail("PI-D", id, "decision is not on the π-smallest unassigned variable");
            break;
        case ActionKind::Unit: {
            if (am.always_c && conflict) return CheckReport::fail("ALWAYS-C", id, "propagation during a conflict");
            if (a.reason < 0 || a.reason >= static_cast<int>(s.clauses().size()))
                return CheckReport::fail("bad-unit", id, "unknown clause id");
            auto r = restrict_clause(s.clauses()[a.reason], s.rho());
            if (!r || r->width() != 1 || r->lits()[0] != Lit::make(a.var, a.val))
                return CheckReport::fail("bad-unit", id, a.str());
            break;
        }
        case ActionKind::Learn: {
            if (am.space && static_cast<int>(s.clauses().size()) >= *am.space)
                return CheckReport::fail("SPACE", id, "learning with a full clause store");
            WitnessSearch ws(s);
            Amendments plain;
            if (!learnable_under(s, ws, a.clause, plain))
                return CheckReport::fail("not-learnable", id, a.clause.str());
            if (!learnable_under(s, ws, a.clause, am))
                return CheckReport::fail("amendment-shrink", id, a.clause.str());
            if (!a.clause.empty() && learnable_under(s, ws, Clause(), am))
                return CheckReport::fail("empty-clause-pending", id, "0 is learnable, only (0,Λ) is allowed");
            if (a.keep > s.trail().size()) return CheckReport::fail("bad-prefix", id, "prefix longer than trail");
            if (a.clause.empty()) {
                if (a.keep != 0) return CheckReport::fail("bad-prefix", id, "(0,t*) needs t* = Λ");
                break;
            }
            std::size_t limit = 0;
            Restriction rho(s.num_vars());
            for (std::size_t p = 0; p <= s.trail().size(); ++p) {
                if (p > 0) rho.set(s.trail()[p - 1].var, s.trail()[p - 1].val);
                if (falsified(a.clause, rho)) break;
                limit = p;
            }
            if (a.keep > limit) return CheckReport::fail("bad-prefix", id, "clause falsified by kept prefix");
            if (am.always_r && a.keep != 0) return CheckReport::fail("ALWAYS-R", id, "restart required");
            if (am.never_r && a.keep != limit) return CheckReport::fail("NEVER-R", id, "longest prefix required");
            break;
        }
        }
        s = transition(s, a);
    }
    if (trace.terminal && !s.terminal()) return CheckReport::fail("not-terminal", -1, "trace claims success");
    CheckReport ok;
    ok.size = static_cast<long>(trace.actions.size());
    return ok;
}

// ---- trace format ----

RunTrace read_trace(std::istream &in, const Cnf &tau) {
    RunTrace tr;
    tr.initial = tau;
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag[0] == 'c') continue;
        if (tag == "p") {
            std::string kind;
            int n;
            if (!(ls >> kind >> n) || kind != "run") throw ParseError("expected 'p run <n>'");
            if (n != tau.num_vars()) throw ParseError("trace variable count differs from the CNF");
            header = true;
            continue;
        }
        if (!header) throw ParseError("missing 'p run' header");
        if (tag == "d") {
            int v, a;
            if (!(ls >> v >> a)) throw ParseError("bad decision line");
            tr.actions.push_back(Action::decide(v, a));
        } else if (tag == "u") {
            int v, a, c;
            if (!(ls >> v >> a >> c)) throw ParseError("bad unit line");
            tr.actions.push_back(Action::unit(v, a, c - 1));
        } else if (tag == "l") {
            std::vector<int> lits;
            int d;
            while ((ls >> d) && d != 0) lits.push_back(d);
            long keep;
            if (!(ls >> keep) || keep < 0) throw ParseError("bad learn line");
            try {
                tr.actions.push_back(Action::learn(Clause::from_dimacs(lits), static_cast<std::size_t>(keep)));
            } catch (const std::invalid_argument &e) {
                throw ParseError(e.what());
            }
        } else if (tag == "end") {
            tr.terminal = true;
        } else {
            throw ParseError("unknown trace tag '" + tag + "'");
        }
    }
    if (!header) throw ParseError("missing 'p run' header");
    return tr;
}

void write_trace(std::ostream &out, const RunTrace &tr) {
    out << "p run " << tr.initial.num_vars() << '\n';
    for (const Action &a : tr.actions) {
        switch (a.kind) {
        case ActionKind::Decision: out << "d " << a.var << ' ' << a.val << '\n'; break;
        case ActionKind::Unit: out << "u " << a.var << ' ' << a.val << ' ' << a.reason + 1 << '\n'; break;
        case ActionKind::Learn:
            out << 'l';
            for (int d : a.clause.to_dimacs()) out << ' ' << d;
            out << " 0 " << a.keep << '\n';
            break;
        }
    }
    if (tr.terminal) out << "end\n";
}

}  // namespace pl
