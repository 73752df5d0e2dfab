#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

#include "prooflab/transforms.hpp"

namespace pl {

namespace {

std::vector<int> reasons_for(const Trail &t, const std::vector<int> &unit_lines) {
    std::vector<int> r(t.size(), -1);
    for (std::size_t i = 0; i < t.size(); ++i)
        if (!t[i].decision) r[i] = unit_lines.at(i);
    return r;
}

}  // namespace

// ---- CDCL run -> π-P0 ----

P0Proof p0_from_cdcl(const RunTrace &trace, const VarOrder &order) {
    const Cnf &tau = trace.initial;
    P0Builder b(tau.num_vars(), order);
    std::map<Clause, int> line;
    auto get = [&](const Clause &c) {
        auto it = line.find(c);
        if (it != line.end()) return it->second;
        if (!tau.contains(c)) throw std::logic_error("p0_from_cdcl: clause " + c.str() + " has no line");
        int id = b.axiom(c);
        line.emplace(c, id);
        return id;
    };
    CdclState s(tau);
    if (s.contains(Clause())) {
        get(Clause());
        return b.take();
    }
    // clause line of the reason behind each unit of the current trail
    std::vector<int> unit_lines;
    int cur = -1;
    for (const Action &a : trace.actions) {
        switch (a.kind) {
        case ActionKind::Decision:
            cur = b.decide(cur, a.var, a.val);
            unit_lines.push_back(-1);
            break;
        case ActionKind::Unit: {
            int cl = get(s.clauses().at(a.reason));
            cur = b.propagate(cur, a.var, a.val, cl);
            unit_lines.push_back(cl);
            break;
        }
        case ActionKind::Learn: {
            if (!line.count(a.clause)) {
                auto wit = learned_clause_witness(s, a.clause);
                if (!wit) throw std::invalid_argument("p0_from_cdcl: learned clause has no witness");
                int c = get(wit->conflict);
                for (std::size_t i = wit->justify.size(); i-- > 0;) c = b.learn(get(wit->justify[i]), c, cur);
                if (b.clause(c) != a.clause) throw std::logic_error("p0_from_cdcl: witness recomposes to another clause");
                line.emplace(a.clause, c);
            }
            unit_lines.resize(a.keep);
            Trail prefix(s.trail().begin(), s.trail().begin() + static_cast<long>(a.keep));
            cur = b.trail(prefix, reasons_for(prefix, unit_lines));
            break;
        }
        }
        s = transition(s, a);
    }
    return b.take();
}

// ---- π-P0 -> CDCL(π-D, FIRST-L) ----

RunTrace cdcl_from_p0(const P0Proof &proof, const Cnf &tau) {
    if (auto r = check_p0(proof, tau); !r.ok) throw std::invalid_argument("cdcl_from_p0: invalid proof: " + r.code);
    Amendments am;
    am.pi_d = proof.order;
    am.first_l = true;
    RunTrace tr;
    tr.initial = tau;
    CdclState s(tau);
    auto apply = [&](const Action &a) {
        tr.digests.push_back(s.digest());
        tr.actions.push_back(a);
        s = transition(s, a);
    };
    auto reason_id = [&](int clause_line) {
        const P0Line &cl = proof.lines[clause_line];
        if (cl.rule == P0Rule::Weakening) throw std::invalid_argument("cdcl_from_p0: weakening lines are not simulated");
        int id = s.clause_id(cl.clause);
        if (id < 0) throw std::logic_error("cdcl_from_p0: reason clause not in the clause set");
        return id;
    };
    const int n = tau.num_vars();
    std::map<Trail, int> trail_line;
    for (std::size_t k = 0; k < proof.lines.size(); ++k)
        if (proof.lines[k].is_trail()) trail_line.emplace(proof.lines[k].trail, static_cast<int>(k));
    for (const P0Line &L : proof.lines) {
        if (s.terminal()) break;
        if (L.rule == P0Rule::Weakening) throw std::invalid_argument("cdcl_from_p0: weakening lines are not simulated");
        if (L.rule != P0Rule::Learning || s.contains(L.clause)) continue;
        const Clause &a = proof.lines[L.c1].clause, &b = proof.lines[L.c2].clause;
        const Trail &t = proof.lines[L.via].trail;
        int x = *unique_clash(a, b);
        std::size_t r = 0;
        while (t[r].var != x) ++r;
        const int val = t[r].val;
        const Clause &cside = a.sign_of(x) == val ? a : b;
        const Clause &dside = a.sign_of(x) == val ? b : a;
        // rebuild t[< r] exactly
        for (std::size_t i = 0; i < r; ++i) {
            if (t[i].decision) {
                apply(Action::decide(t[i].var, t[i].val));
                continue;
            }
            // the unit line that appended t[i]
            Trail pre(t.begin(), t.begin() + static_cast<long>(i) + 1);
            int tl = trail_line.at(pre);
            apply(Action::unit(t[i].var, t[i].val, reason_id(proof.lines[tl].c1)));
        }
        apply(Action::unit(x, val, s.clause_id(cside)));
        Restriction tv = trail_restriction(t, n);
        while (!falsified(dside, s.rho())) {
            int v = proof.order.first_unassigned(s.rho());
            if (v == 0) throw std::logic_error("cdcl_from_p0: variables exhausted before the conflict");
            apply(Action::decide(v, tv.assigned(v) ? tv.get(v) : 0));
        }
        if (learnable(s, Clause(), am)) {
            apply(Action::learn(Clause(), 0));
            break;
        }
        if (!learnable(s, L.clause, am))
            throw std::logic_error("cdcl_from_p0: " + L.clause.str() + " is not learnable under FIRST-L");
        apply(Action::learn(L.clause, 0));
    }
    tr.terminal = s.terminal();
    return tr;
}

// ---- lifting ----

P0Proof lift(const P0Proof &proof, const Cnf &tau, const VarOrder &order) {
    const int x1 = order.var_at(1);
    if (proof.order.sequence() != order.without(x1).sequence())
        throw std::invalid_argument("lift: proof order must be the target order without x1");
    P0Builder b(tau.num_vars(), order, proof.allow_weakening);
    const Lit pos = Lit::make(x1, 1);
    int root = b.decide(-1, x1, 0);
    std::vector<int> id(proof.lines.size(), -1);
    for (std::size_t k = 0; k < proof.lines.size(); ++k) {
        const P0Line &l = proof.lines[k];
        switch (l.rule) {
        case P0Rule::Axiom: {
            if (l.clause.has_var(x1)) throw std::invalid_argument("lift: x1 occurs in the source axioms");
            if (tau.contains(l.clause)) id[k] = b.axiom(l.clause);
            else if (tau.contains(l.clause.with(pos))) id[k] = b.axiom(l.clause.with(pos));
            else throw std::invalid_argument("lift: neither A nor A∨x1 is in tau for A = " + l.clause.str());
            break;
        }
        case P0Rule::Decision:
        case P0Rule::Unit: {
            int parent = l.parent < 0 ? root : id[l.parent];
            const Assignment &a = l.trail.back();
            id[k] = a.decision ? b.decide(parent, a.var, a.val) : b.propagate(parent, a.var, a.val, id[l.c1]);
            break;
        }
        case P0Rule::Learning: id[k] = b.learn(id[l.c1], id[l.c2], id[l.via]); break;
        case P0Rule::Weakening: {
            Clause target = l.clause;
            if (b.clause(id[l.c1]).contains(pos)) target = target.with(pos);
            id[k] = b.weaken(id[l.c1], target);
            break;
        }
        }
    }
    P0Proof out = b.take();
    if (auto r = check_p0(out, tau); !r.ok) throw std::logic_error("lift: output fails the checker: " + r.code);
    return out;
}

// ---- weakening step ----

int weakening_step(P0Builder &b, int cx, int dx, int t, int e, long *length) {
    const std::size_t before = b.proof().size();
    auto x = unique_clash(b.clause(cx), b.clause(dx));
    if (!x) throw std::invalid_argument("weakening_step: premises do not resolve");
    const int n = b.num_vars();
    Trail tt = b.trail_of(t);
    Restriction rho = trail_restriction(tt, n);
    if (rho.assigned(*x)) throw std::invalid_argument("weakening_step: x is assigned by t");
    const Clause E = b.clause(e);
    if (!falsified(E, rho)) throw std::invalid_argument("weakening_step: E|_t != 0");
    Clause res = *resolve(b.clause(cx), b.clause(dx), *x);
    auto rest = restrict_clause(res, rho);
    if (!rest) throw std::invalid_argument("weakening_step: (C∨D)|_t = 1");
    // units falsifying each remaining literal, then x = 1 so that C∨x is the C-side
    std::vector<Lit> steps(rest->lits().begin(), rest->lits().end());
    int cur = t;
    for (Lit l : steps) {
        int eg = b.weaken(e, E.with(~l));
        cur = b.propagate(cur, l.var(), 1 - l.sign(), eg);
    }
    int sx = b.clause(cx).sign_of(*x);
    int ex = b.weaken(e, E.with(Lit::make(*x, sx)));
    cur = b.propagate(cur, *x, sx, ex);
    int out = b.learn(cx, dx, cur);
    if (length) *length = static_cast<long>(b.proof().size() - before);
    return out;
}

WeakeningFragment weakening_step(const Clause &cx, const Clause &dx, const Trail &t, const Clause &e,
                                 const VarOrder &order, int num_vars) {
    P0Builder b(num_vars, order, true);
    int icx = b.axiom(cx), idx = b.axiom(dx), ie = b.axiom(e);
    std::vector<int> reasons(t.size(), -1);
    for (const Assignment &a : t)
        if (!a.decision) throw std::invalid_argument("weakening_step: t must be a decision trail");
    int it = b.trail(t, reasons);
    WeakeningFragment f;
    f.result = weakening_step(b, icx, idx, it, ie, &f.length);
    f.proof = b.take();
    return f;
}

// ---- resolution -> π-P0 + weakening ----

P0Proof p0w_simulate(const ResolutionProof &pi, const Cnf &tau, const VarOrder &order) {
    if (auto r = check_resolution(pi, tau); !r.ok) throw std::invalid_argument("p0w_simulate: invalid input proof");
    const int n = order.size();
    const int nv = tau.num_vars();
    P0Builder b(nv, order, true);
    if (tau.has_empty()) {
        b.axiom(Clause());
        return b.take();
    }
    auto C = [&](int i) {
        std::vector<Lit> l;
        for (int j = 1; j <= i; ++j) l.push_back(Lit::make(order.var_at(j), 1));
        return Clause(l);
    };
    // C_n from an all-positive clause of tau
    int ci = -1;
    for (const Clause &c : tau.clauses())
        if (std::all_of(c.lits().begin(), c.lits().end(), [](Lit l) { return l.sign() == 1; })) {
            ci = b.weaken(b.axiom(c), C(n));
            break;
        }
    if (ci < 0) throw std::invalid_argument("p0w_simulate: tau has no all-positive clause, so it is satisfiable");
    ResolutionProof core = connected_core(pi).proof;
    for (int i = n - 1; i >= 0; --i) {
        const Clause Ci = C(i);
        const int xi1 = order.var_at(i + 1);
        Trail t0, t1;
        for (int j = 1; j <= i; ++j) {
            t0.push_back({order.var_at(j), 0, true});
            t1.push_back({order.var_at(j), 0, true});
        }
        t0.push_back({xi1, 0, true});
        t1.push_back({xi1, 1, true});
        Restriction rho = trail_restriction(t1, nv);
        MappedProof R = restrict_proof(core, rho);
        ResolutionProof Pi = connected_core(R.proof).proof;
        // axioms of Π_i: the original axiom whose restriction it is
        std::map<Clause, Clause> origin;
        for (std::size_t v = 0; v < core.size(); ++v)
            if (core.nodes[v].rule == Rule::Axiom && R.map[v] >= 0) origin.emplace(R.proof.clause(R.map[v]), core.clause(v));
        const int tl0 = b.trail(t0, std::vector<int>(t0.size(), -1));
        std::vector<int> id(Pi.size(), -1);
        for (std::size_t v = 0; v < Pi.size(); ++v) {
            const ProofNode &nd = Pi.nodes[v];
            Clause target = nd.clause.join(Ci);
            if (nd.rule == Rule::Axiom) {
                const Clause &orig = origin.at(nd.clause);
                int ax = b.axiom(orig);
                if (orig.contains(Lit::make(xi1, 0))) {
                    // Res(C_{i+1}, A) under [x_1 d=0, .., x_i d=0, x_{i+1} d=1, decisions falsifying the rest]
                    if (auto f = b.find(target)) {
                        id[v] = *f;
                        continue;
                    }
                    Trail t = t1;
                    Restriction r = rho;
                    Clause rest = orig.without_var(xi1);
                    while (!falsified(rest, r)) {
                        int z = order.first_unassigned(r);
                        int val = rest.has_var(z) ? 1 - rest.sign_of(z) : 0;
                        t.push_back({z, val, true});
                        r.set(z, val);
                    }
                    id[v] = b.learn(ci, ax, b.trail(t, std::vector<int>(t.size(), -1)));
                } else {
                    id[v] = b.weaken(ax, target);
                }
                if (b.clause(id[v]) != target) throw std::logic_error("p0w_simulate: lifted axiom mismatch");
            } else if (nd.rule == Rule::Resolution) {
                if (auto f = b.find(target)) {
                    id[v] = *f;
                    continue;
                }
                int p = id[nd.p1], q = id[nd.p2];
                if (b.clause(p).sign_of(nd.pivot) == 0) std::swap(p, q);
                id[v] = weakening_step(b, p, q, tl0, ci);
            } else {
                throw std::invalid_argument("p0w_simulate: weakening in the input proof");
            }
        }
        ci = id[Pi.first_empty()];
        if (b.clause(ci) != Ci) throw std::logic_error("p0w_simulate: stage did not derive C_i");
    }
    P0Proof out = b.take();
    if (auto r = check_p0(out, tau); !r.ok)
        throw std::logic_error("p0w_simulate: output fails the checker: " + r.code + " at " + std::to_string(r.where));
    return out;
}

}  // namespace pl
