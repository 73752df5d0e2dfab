#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

#include "prooflab/transforms.hpp"

namespace pl {

bool ordered_up_to(const ResolutionProof &pi, const VarOrder &order, int k) {
    // below[v]: largest pivot rank among resolutions strictly between v and the sink
    std::vector<int> below(pi.size(), 0);
    for (std::size_t v = pi.size(); v-- > 0;) {
        const ProofNode &n = pi.nodes[v];
        if (n.rule == Rule::Axiom) continue;
        int here = below[v];
        if (n.rule == Rule::Resolution) {
            int i = order.rank(n.pivot);
            if (i <= k && here >= i) return false;
            here = std::max(here, i);
        }
        below[n.p1] = std::max(below[n.p1], here);
        if (n.rule == Rule::Resolution) below[n.p2] = std::max(below[n.p2], here);
    }
    return true;
}

namespace {

[[noreturn]] void audit_fail(int stage, const std::string &what) {
    throw std::logic_error("half_to_ordered stage " + std::to_string(stage) + ": " + what);
}

ResolutionProof core(const ResolutionProof &pi) {
    ResolutionProof q = contract_weakenings(pi).proof;
    return connected_core(q).proof;
}

// One stage Π_k -> Π_{k+1}.
ResolutionProof stage(const ResolutionProof &P, const VarOrder &order, int k, HalfToOrderedReport *rep) {
    const std::size_t N = P.size();
    const int x = order.var_at(k + 1);
    NodeSet small(N, 0);
    for (std::size_t v = 0; v < N; ++v) small[v] = is_k_small(P.clause(v), order, k);
    std::vector<int> L = min_nodes(P, small);
    NodeSet inL(N, 0), inD(N, 0);
    for (int v : L) inL[v] = 1;
    for (std::size_t v = 0; v < N; ++v) inD[v] = !small[v] || inL[v];
    if (dcl(P, inL) != inD) audit_fail(k, "D differs from dcl(L_k)");
    long dsize = std::count(inD.begin(), inD.end(), 1);
    if (rep) {
        if (!rep->dcl_sizes.empty() && dsize > rep->dcl_sizes.back()) audit_fail(k, "|dcl(L_k)| grew");
        rep->dcl_sizes.push_back(dsize);
    }

    // M: resolutions on x in D with no such resolution strictly above them
    NodeSet onx(N, 0);
    for (std::size_t v = 0; v < N; ++v)
        onx[v] = inD[v] && P.nodes[v].rule == Rule::Resolution && P.nodes[v].pivot == x;
    std::vector<int> M = min_nodes(P, onx);
    if (M.empty()) return P;
    std::sort(M.begin(), M.end());

    struct WNode {
        Clause c;
        Rule rule;
        int p1, p2, pivot;
    };
    std::vector<WNode> cur(N);
    for (std::size_t v = 0; v < N; ++v) {
        const ProofNode &n = P.nodes[v];
        cur[v] = {n.clause, n.rule, n.p1, n.p2, n.pivot};
    }
    std::vector<int> changed_in(N, -1), wprime(M.size());

    for (std::size_t i = 0; i < M.size(); ++i) {
        int w = M[i];
        NodeSet A = ucl(P, singleton(P, w));
        for (std::size_t v = 0; v < N; ++v) A[v] = A[v] && inD[v];
        // w' carries the k-small side B ∨ x^σ
        int a = cur[w].p1, b = cur[w].p2;
        int wp = is_k_small(cur[a].c.without_var(x), order, k) ? a : b;
        int wpp = wp == a ? b : a;
        if (!is_k_small(cur[wp].c.without_var(x), order, k)) audit_fail(k, "step at a node of M is not half-ordered");
        wprime[i] = wp;
        int sigma = cur[wp].c.sign_of(x);
        Lit keep = Lit::make(x, sigma), add = ~keep;
        Clause B = cur[wp].c.without_var(x);

        for (std::size_t vi = static_cast<std::size_t>(w); vi < N; ++vi) {
            if (!A[vi]) continue;
            int v = static_cast<int>(vi);
            WNode &nv = cur[v];
            Clause before = nv.c;
            if (!B.subset_of(nv.c)) audit_fail(k, "B is not a subclause of a node in A_i");
            if (v == w) {
                nv.c = nv.c.with(add);
                nv.rule = Rule::Weakening;
                nv.p1 = wpp;
                nv.p2 = -1;
            } else if (nv.c.contains(keep)) {
                nv.rule = Rule::Weakening;
                nv.p1 = wp;
                nv.p2 = -1;
            } else if (nv.rule == Rule::Resolution && nv.pivot == x) {
                int u = cur[nv.p1].c.contains(add) ? nv.p1 : nv.p2;
                nv.c = nv.c.with(add);
                nv.rule = Rule::Weakening;
                nv.p1 = u;
                nv.p2 = -1;
            } else if (nv.rule == Rule::Weakening) {
                nv.c = nv.c.join(cur[nv.p1].c);
            } else if (nv.rule == Rule::Resolution) {
                auto r = resolve(cur[nv.p1].c, cur[nv.p2].c, nv.pivot);
                if (!r) audit_fail(k, "rewired step no longer resolves");
                nv.c = *r;
            }
            if (nv.c != before && changed_in[v] < 0) changed_in[v] = static_cast<int>(i);
            const Clause &orig = P.clause(v);
            if (nv.c != orig && nv.c != orig.with(Lit::make(x, 0)) && nv.c != orig.with(Lit::make(x, 1)))
                audit_fail(k, "clause left {c, c∨x, c∨¬x}");
        }
        if (rep) ++rep->rounds;
    }

    ResolutionProof Q;
    Q.num_vars = P.num_vars;
    Q.allow_weakening = true;
    std::vector<int> id(N, -1), out(N, -1);
    for (std::size_t v = 0; v < N; ++v) {
        if (inD[v]) {
            const WNode &nv = cur[v];
            switch (nv.rule) {
            case Rule::Axiom: id[v] = Q.add_axiom(nv.c); break;
            case Rule::Weakening: id[v] = Q.add_weakening(id[nv.p1], nv.c); break;
            case Rule::Resolution:
                id[v] = Q.add_resolution(id[nv.p1], id[nv.p2], nv.pivot);
                if (Q.clause(id[v]) != nv.c) audit_fail(k, "resolvent mismatch");
                break;
            }
            out[v] = id[v];
            if (inL[v] && changed_in[v] >= 0) {
                out[v] = Q.add_resolution(id[wprime[changed_in[v]]], id[v], x);
                if (Q.clause(out[v]) != P.clause(v)) audit_fail(k, "repair node does not restore c_D(v)");
            }
        } else {
            const ProofNode &n = P.nodes[v];
            if (n.rule != Rule::Resolution) audit_fail(k, "U holds a non-resolution node");
            out[v] = id[v] = Q.add_resolution(out[n.p1], out[n.p2], n.pivot);
        }
    }
    ResolutionProof next = core(Q);
    if (!ordered_up_to(next, order, k + 1)) audit_fail(k, "result is not ordered up to k+1");
    if (auto r = check_half_ordered(next, order); !r.ok) audit_fail(k, "result is not half-ordered: " + r.code);
    return next;
}

}  // namespace

ResolutionProof half_to_ordered(const ResolutionProof &pi, const VarOrder &order, HalfToOrderedReport *report) {
    if (auto r = check_half_ordered(pi, order); !r.ok)
        throw std::invalid_argument("half_to_ordered: input is not half-ordered (" + r.code + ")");
    ResolutionProof P = core(pi);
    if (report) {
        *report = {};
        report->input_size = static_cast<long>(pi.size());
    }
    for (int k = 0; k + 1 < order.size(); ++k) {
        if (!ordered_up_to(P, order, k)) audit_fail(k, "input to the stage is not ordered up to k");
        P = stage(P, order, k, report);
        if (report) report->stage_sizes.push_back(static_cast<long>(P.size()));
    }
    if (auto r = check_ordered(P, order); !r.ok) throw std::logic_error("half_to_ordered: output not ordered: " + r.code);
    if (report) report->output_size = static_cast<long>(P.size());
    return P;
}

// ---- half-ordered step -> partial CDCL run ----

std::vector<Action> half_to_cdcl(const CdclState &state, const Clause &a, const Clause &b, const VarOrder &order) {
    auto x = unique_clash(a, b);
    if (!x) throw std::invalid_argument("half_to_cdcl: premises do not resolve");
    if (!state.trail().empty()) throw std::invalid_argument("half_to_cdcl: state must have the empty trail");
    if (!state.contains(a) || !state.contains(b)) throw std::invalid_argument("half_to_cdcl: premise not in the clause set");
    const Clause *cs = nullptr;
    if (side_below(a, *x, order)) cs = &a;
    else if (side_below(b, *x, order)) cs = &b;
    else throw std::invalid_argument("half_to_cdcl: neither premise is below the pivot");
    Clause res = *resolve(a, b, *x);
    if (state.contains(res)) return {};

    Amendments am;
    am.pi_d = order;
    am.decision_l = true;
    const int s = cs->sign_of(*x);
    const Clause side = cs->without_var(*x);
    CdclState st = state;
    std::vector<Action> out;
    auto apply = [&](const Action &act) {
        out.push_back(act);
        st = transition(st, act);
    };
    while (true) {
        const Restriction &rho = st.rho();
        if (!rho.assigned(*x) && falsified(side, rho)) {
            apply(Action::unit(*x, s, st.clause_id(*cs)));
            continue;
        }
        if (rho.assigned(*x) && falsified(res, rho)) break;
        int v = order.first_unassigned(rho);
        if (v == 0) throw std::logic_error("half_to_cdcl: ran out of variables");
        int val = res.has_var(v) ? 1 - res.sign_of(v) : 0;
        apply(Action::decide(v, val));
    }
    if (learnable(st, Clause(), am)) apply(Action::learn(Clause(), 0));
    else if (learnable(st, res, am)) apply(Action::learn(res, 0));
    else throw std::logic_error("half_to_cdcl: resolvent is not learnable at the built trail");
    return out;
}

RunTrace half_proof_to_run(const ResolutionProof &pi, const Cnf &tau, const VarOrder &order,
                           std::size_t *longest_fragment) {
    RunTrace tr;
    tr.initial = tau;
    CdclState s(tau);
    if (longest_fragment) *longest_fragment = 0;
    for (const ProofNode &n : pi.nodes) {
        if (s.terminal()) break;
        if (n.rule == Rule::Weakening) throw std::invalid_argument("half_proof_to_run: weakening step");
        if (n.rule != Rule::Resolution) continue;
        const Clause &a = pi.clause(n.p1), &b = pi.clause(n.p2);
        auto acts = half_to_cdcl(s, a, b, order);
        if (longest_fragment) *longest_fragment = std::max(*longest_fragment, acts.size());
        for (const Action &act : acts) {
            tr.digests.push_back(s.digest());
            tr.actions.push_back(act);
            s = transition(s, act);
        }
    }
    tr.terminal = s.terminal();
    return tr;
}

// ---- CDCL run -> half-ordered refutation ----

ResolutionProof cdcl_to_half(const RunTrace &trace, const VarOrder &order) {
    ResolutionProof pi;
    pi.num_vars = trace.initial.num_vars();
    pi.allow_weakening = true;
    std::map<Clause, int> node;
    auto get = [&](const Clause &c) {
        auto it = node.find(c);
        if (it != node.end()) return it->second;
        if (!trace.initial.contains(c)) throw std::logic_error("cdcl_to_half: clause " + c.str() + " has no derivation");
        int id = pi.add_axiom(c);
        node.emplace(c, id);
        return id;
    };
    CdclState s(trace.initial);
    if (s.contains(Clause())) {
        get(Clause());
        return pi;
    }
    for (const Action &a : trace.actions) {
        if (a.kind == ActionKind::Learn && !node.count(a.clause)) {
            auto wit = learned_clause_witness(s, a.clause);
            if (!wit) throw std::invalid_argument("cdcl_to_half: learned clause has no witness");
            const std::size_t k = wit->justify.size();
            std::vector<int> y(k);
            for (std::size_t mu = 0; mu < k; ++mu) y[mu] = s.trail()[wit->positions[mu] - 1].var;
            // C'_1 .. C'_{k+1}
            std::vector<int> cp(k + 1);
            for (std::size_t nu = 0; nu <= k; ++nu) {
                const Clause &cnu = nu < k ? wit->justify[nu] : wit->conflict;
                int cur = get(cnu);
                for (std::size_t mu = nu; mu-- > 0;) {
                    const Clause &c = pi.clause(cur), &d = pi.clause(cp[mu]);
                    int sc = c.sign_of(y[mu]), sd = d.sign_of(y[mu]);
                    if (sc >= 0 && sd >= 0 && sc != sd) cur = pi.add_resolution(cur, cp[mu], y[mu]);
                }
                cp[nu] = cur;
            }
            int r = cp[k];
            if (!pi.clause(r).subset_of(a.clause)) throw std::logic_error("cdcl_to_half: C'_{k+1} is not inside D");
            if (pi.clause(r) != a.clause) r = pi.add_weakening(r, a.clause);
            node.emplace(a.clause, r);
        }
        s = transition(s, a);
    }
    if (!node.count(Clause())) throw std::invalid_argument("cdcl_to_half: run never learns 0");
    ResolutionProof out = connected_core(contract_weakenings(pi).proof).proof;
    if (auto r = check_half_ordered(out, order); !r.ok)
        throw std::logic_error("cdcl_to_half: output not half-ordered: " + r.code + " " + r.detail);
    return out;
}

}  // namespace pl
