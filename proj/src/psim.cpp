#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

#include "prooflab/transforms.hpp"

namespace pl {

// ---- variable deletion ----

namespace {

Clause del(const Clause &c, const std::vector<char> &inS) {
    std::vector<Lit> out;
    for (Lit l : c.lits())
        if (!inS[l.var()]) out.push_back(l);
    return Clause(out);
}

}  // namespace

ResolutionProof delete_vars(const ResolutionProof &pi, const std::vector<int> &S, DeletionReport *report) {
    if (!is_connected_refutation(pi)) throw std::invalid_argument("delete_vars: proof is not a connected refutation");
    std::vector<char> inS(pi.num_vars + 1, 0);
    for (int v : S) inS.at(v) = 1;
    std::vector<int> vars = proof_vars(pi);
    if (std::all_of(vars.begin(), vars.end(), [&](int v) { return inS[v] != 0; }))
        throw std::invalid_argument("delete_vars: S covers every variable of the proof");

    const std::size_t N = pi.size();
    DeletionReport rep;
    rep.deleted.assign(N, 0);
    rep.surviving.assign(N, 0);
    rep.input_size = static_cast<long>(N);
    // generalized resolution proof with dummy weakenings, contracted afterwards
    ResolutionProof g;
    g.num_vars = pi.num_vars;
    g.allow_weakening = true;
    std::vector<int> id(N, -1);
    // all_in_S[v]: every axiom above v has its variables inside S
    std::vector<char> all_in_S(N, 0);
    for (std::size_t v = 0; v < N; ++v) {
        const ProofNode &n = pi.nodes[v];
        const Clause target = del(n.clause, inS);
        if (n.rule == Rule::Axiom) {
            all_in_S[v] = target.empty();
            if (target.empty()) rep.deleted[v] = 1;
            else id[v] = g.add_axiom(target);
        } else if (n.rule == Rule::Weakening) {
            all_in_S[v] = all_in_S[n.p1];
            if (rep.deleted[n.p1]) rep.deleted[v] = 1;
            else id[v] = g.add_weakening(id[n.p1], g.clause(id[n.p1]));
        } else {
            if (inS[n.pivot]) ++rep.s_resolutions;
            all_in_S[v] = all_in_S[n.p1] && all_in_S[n.p2];
            bool d1 = rep.deleted[n.p1], d2 = rep.deleted[n.p2];
            if (d1 && d2) {
                rep.deleted[v] = 1;
            } else {
                int a = d1 ? -1 : id[n.p1], b = d2 ? -1 : id[n.p2];
                bool resolvable = a >= 0 && b >= 0 && g.clause(a).has_var(n.pivot) && g.clause(b).has_var(n.pivot);
                if (resolvable) {
                    id[v] = g.add_resolution(a, b, n.pivot);
                } else {
                    int keep = (a >= 0 && g.clause(a).subset_of(target)) ? a : b;
                    if (keep < 0 || !g.clause(keep).subset_of(target))
                        throw std::logic_error("delete_vars: no premise fits under del_S(c(v))");
                    id[v] = g.add_weakening(keep, g.clause(keep));
                    ++rep.dummy_edges;
                }
            }
        }
        if (rep.deleted[v] != all_in_S[v]) throw std::logic_error("delete_vars: deletion disagrees with the axiom test");
        if (id[v] >= 0 && !g.clause(id[v]).subset_of(target))
            throw std::logic_error("delete_vars: surviving clause is not inside del_S of the original");
    }
    int root = pi.first_empty();
    if (rep.deleted[root]) throw std::logic_error("delete_vars: the root was deleted");
    MappedProof c = contract_weakenings(g);
    MappedProof core = connected_core(c.proof);
    for (std::size_t v = 0; v < N; ++v)
        if (id[v] >= 0 && core.map[c.map[id[v]]] >= 0) rep.surviving[v] = 1;
    rep.output_size = static_cast<long>(core.proof.size());
    if (rep.output_size > rep.input_size - rep.s_resolutions)
        throw std::logic_error("delete_vars: size bound |del_S(Π)| <= |Π| - t violated");
    if (report) *report = std::move(rep);
    return std::move(core.proof);
}

// ---- both literals of every variable ----

ResolutionProof all_lits_from_refutation(const ResolutionProof &pi) {
    if (!is_connected_refutation(pi)) throw std::invalid_argument("all_lits_from_refutation: needs a connected refutation");
    ResolutionProof out = pi;
    std::map<Lit, int> unit;
    for (std::size_t v = 0; v < out.size(); ++v)
        if (out.clause(v).width() == 1) unit.emplace(out.clause(v).lits()[0], static_cast<int>(v));
    auto derive = [&](int from, int x) {
        int cur = from;
        for (Lit l : pi.clause(from).lits()) {
            if (l.var() == x) continue;
            auto it = unit.find(~l);
            if (it == unit.end()) throw std::logic_error("all_lits_from_refutation: missing unit " + std::to_string((~l).dimacs()));
            cur = out.add_resolution(cur, it->second, l.var());
        }
        unit.emplace(out.clause(cur).lits()[0], cur);
    };
    for (std::size_t v = pi.size(); v-- > 0;) {
        const ProofNode &n = pi.nodes[v];
        if (n.rule != Rule::Resolution) continue;
        int x = n.pivot;
        if (!unit.count(Lit::make(x, 0)) || !unit.count(Lit::make(x, 1))) {
            Lit l1 = Lit::make(x, pi.clause(n.p1).sign_of(x));
            if (!unit.count(l1)) derive(n.p1, x);
            if (!unit.count(~l1)) derive(n.p2, x);
        }
    }
    return out;
}

Clause find_axiom_with_literal(const ResolutionProof &pi, int x, int a) {
    Restriction rho(pi.num_vars);
    rho.set(x, a);
    MappedProof R = restrict_proof(pi, rho);
    int z = R.proof.first_empty();
    if (z < 0) throw std::logic_error("find_axiom_with_literal: restriction does not refute");
    NodeSet used = dcl(R.proof, singleton(R.proof, z));
    Lit want = Lit::make(x, 1 - a);
    for (std::size_t v = 0; v < pi.size(); ++v)
        if (pi.nodes[v].rule == Rule::Axiom && R.map[v] >= 0 && used[R.map[v]] && pi.clause(v).contains(want))
            return pi.clause(v);
    throw std::logic_error("find_axiom_with_literal: no axiom holds x^(1-a)");
}

// ---- PSIM ----

namespace {

// One level of the simulation works over a local variable set.  Its clauses are
// global clauses carrying extra positive literals of the lifted variables, all
// falsified by the prefix; foreign variables met before a local decision are
// decided 0.
struct Ctx {
    Trail prefix;
    std::vector<int> prefix_reasons;
    std::vector<char> local;
    std::vector<char> lifted;
    std::map<Clause, int> axiom;  // stripped local clause -> line
};

struct Step {
    Assignment a;
    int reason = -1;
};

class Psim {
public:
    Psim(const Cnf &tau, const VarOrder &order, PsimReport *rep)
        : n_(tau.num_vars()), order_(order), b_(tau.num_vars(), order), rep_(rep) {}

    P0Builder &builder() { return b_; }

    Clause strip(const Clause &c, const Ctx &ctx) const {
        std::vector<Lit> out;
        for (Lit l : c.lits())
            if (!ctx.lifted[l.var()]) out.push_back(l);
        return Clause(out);
    }

    // Trail line for the context prefix followed by the local steps.
    int materialize(const Ctx &ctx, const std::vector<Step> &steps, Trail *full = nullptr) {
        Trail T = ctx.prefix;
        std::vector<int> R = ctx.prefix_reasons;
        Restriction rho = trail_restriction(T, n_);
        for (const Step &s : steps) {
            if (s.a.decision) {
                int z;
                while ((z = order_.first_unassigned(rho)) != s.a.var) {
                    if (z == 0) throw std::logic_error("psim: decision on an assigned variable");
                    if (ctx.local[z]) throw std::logic_error("psim: local variable skipped by a decision");
                    T.push_back({z, 0, true});
                    R.push_back(-1);
                    rho.set(z, 0);
                }
            }
            T.push_back(s.a);
            R.push_back(s.reason);
            rho.set(s.a.var, s.a.val);
        }
        if (full) *full = T;
        return b_.trail(T, R);
    }

    Ctx child(const Ctx &ctx, const Step &s) {
        Ctx c;
        Trail T;
        materialize(ctx, {s}, &T);
        c.prefix = T;
        c.prefix_reasons = ctx.prefix_reasons;
        c.prefix_reasons.resize(T.size(), -1);
        c.prefix_reasons.back() = s.reason;
        c.lifted = ctx.lifted;
        c.local.assign(n_ + 1, 0);
        return c;
    }

    // Local decisions in π order: forced values first, then 0, until every
    // variable of `need` is assigned.
    std::vector<Step> decide_through(const Ctx &ctx, std::vector<Step> steps, const std::map<int, int> &value,
                                     const std::set<int> &need) {
        Restriction rho = trail_restriction(ctx.prefix, n_);
        for (const Step &s : steps) rho.set(s.a.var, s.a.val);
        auto pending = [&] {
            for (int v : need)
                if (!rho.assigned(v)) return true;
            return false;
        };
        for (int r = 1; r <= order_.size() && pending(); ++r) {
            int v = order_.var_at(r);
            if (rho.assigned(v) || !ctx.local[v]) continue;
            auto it = value.find(v);
            int val = it == value.end() ? 0 : it->second;
            steps.push_back({{v, val, true}, -1});
            rho.set(v, val);
        }
        if (pending()) throw std::logic_error("psim: could not assign every needed variable");
        return steps;
    }

    // Res(c1, c2) on their clash, with a local decision trail that puts the
    // pivot at the value of `cside`'s literal and falsifies everything else.
    int res_by_decisions(const Ctx &ctx, int cside, int other, const std::vector<Step> &pre = {}) {
        const Clause A = b_.clause(cside), B = b_.clause(other);
        int x = *unique_clash(A, B);
        Clause res = *resolve(A, B, x);
        if (auto f = b_.find(res)) return *f;
        std::map<int, int> value;
        std::set<int> need;
        const Clause sres = strip(res, ctx);
        for (Lit l : sres.lits()) {
            value[l.var()] = 1 - l.sign();
            need.insert(l.var());
        }
        value[x] = A.sign_of(x);
        need.insert(x);
        int t = materialize(ctx, decide_through(ctx, pre, value, need));
        return b_.learn(cside, other, t);
    }

    std::map<Lit, int> level(const ResolutionProof &pi, Ctx &ctx, int depth);

private:
    int n_;
    VarOrder order_;
    P0Builder b_;
    PsimReport *rep_;
};

long resolutions(const ResolutionProof &pi) {
    return std::count_if(pi.nodes.begin(), pi.nodes.end(), [](const ProofNode &n) { return n.rule == Rule::Resolution; });
}

std::map<Lit, int> Psim::level(const ResolutionProof &pi, Ctx &ctx, int depth) {
    if (rep_) {
        ++rep_->calls;
        rep_->max_depth = std::max(rep_->max_depth, depth);
    }
    if (depth > 4 * n_ + 8) throw std::logic_error("psim: recursion depth budget exceeded");
    std::vector<int> V = proof_vars(pi);
    std::map<Lit, int> units;
    if (V.empty()) return units;
    auto ax = [&](const Clause &c) {
        auto it = ctx.axiom.find(c);
        if (it == ctx.axiom.end()) throw std::logic_error("psim: no line for local axiom " + c.str());
        return it->second;
    };
    if (V.size() == 1) {
        int x = V[0];
        units[Lit::make(x, 1)] = ax(Clause({Lit::make(x, 1)}));
        units[Lit::make(x, 0)] = ax(Clause({Lit::make(x, 0)}));
        return units;
    }
    int x1 = V[0];
    for (int v : V)
        if (order_.less(v, x1)) x1 = v;
    const Lit X1 = Lit::make(x1, 1), NX1 = Lit::make(x1, 0);
    std::vector<Clause> tau_loc;
    for (const ProofNode &nd : pi.nodes)
        if (nd.rule == Rule::Axiom) tau_loc.push_back(nd.clause);

    // step 2: Π⁰ = core of Π|_{x1=0}, simulated under [x1 d=0] with x1 lifted
    Restriction r0(n_);
    r0.set(x1, 0);
    ResolutionProof pi0 = connected_core(restrict_proof(pi, r0).proof).proof;
    Ctx ctx0 = child(ctx, {{x1, 0, true}, -1});
    ctx0.lifted[x1] = 1;
    std::map<Lit, int> units0;
    bool trivial0 = pi0.size() == 1;
    if (!trivial0) {
        for (int v : proof_vars(pi0)) ctx0.local[v] = 1;
        for (const ProofNode &nd : pi0.nodes) {
            if (nd.rule != Rule::Axiom) continue;
            auto it = ctx.axiom.find(nd.clause);
            ctx0.axiom[nd.clause] = it != ctx.axiom.end() ? it->second : ax(nd.clause.with(X1));
        }
        units0 = level(pi0, ctx0, depth + 1);
    }

    // step 3: x1
    int x1_line = -1;
    if (trivial0) {
        x1_line = ax(Clause({X1}));
    } else {
        // a lifted unit holding x1 clashes with its partner into x1
        for (auto &[l, line] : units0) {
            if (!b_.clause(line).contains(X1)) continue;
            x1_line = res_by_decisions(ctx, line, units0.at(~l), {{{x1, 0, true}, -1}});
            break;
        }
        if (x1_line < 0) {
            Clause C = find_axiom_with_literal(pi, x1, 0);
            std::vector<Step> steps{{{x1, 0, true}, -1}};
            for (Lit l : C.lits())
                if (l.var() != x1) steps.push_back({{l.var(), 1 - l.sign(), false}, units0.at(~l)});
            int t = materialize(ctx, steps);
            int cur = ax(C);
            for (Lit l : C.lits())
                if (l.var() != x1) cur = b_.learn(units0.at(~l), cur, t);
            x1_line = cur;
        }
    }
    if (strip(b_.clause(x1_line), ctx) != Clause({X1})) throw std::logic_error("psim: step 3 did not derive x1");

    // step 4: τ* = {C ∘ x1}, built on demand
    std::map<Clause, int> star;
    auto tau_star = [&](const Clause &C) {
        auto it = star.find(C);
        if (it != star.end()) return it->second;
        int line = ax(C);
        if (C.contains(NX1)) line = res_by_decisions(ctx, x1_line, line);
        star.emplace(C, line);
        return line;
    };

    // step 5: the ψ-context, and the loop over Γ = del_{S ∪ x1}(Π)
    Ctx psi = ctx0;
    psi.local.assign(n_ + 1, 0);
    psi.axiom.clear();
    for (int v : V)
        if (v != x1) psi.local[v] = 1;
    std::map<Lit, int> psi_units = units0;
    std::vector<char> inS(n_ + 1, 0);
    long sub_res = trivial0 ? 0 : resolutions(pi0);
    std::vector<int> S = trivial0 ? std::vector<int>{} : proof_vars(pi0);
    for (int v : S) inS[v] = 1;
    auto done = [&] {
        for (int v : V)
            if (v != x1 && !inS[v]) return false;
        return true;
    };
    while (!done()) {
        std::vector<int> del_set = S;
        del_set.push_back(x1);
        ResolutionProof gamma = delete_vars(pi, del_set);
        std::vector<int> gv = proof_vars(gamma);
        if (gv.empty()) throw std::logic_error("psim: Γ has no variables");
        for (int v : gv)
            if (inS[v]) {
                if (rep_) rep_->disjoint = false;
                throw std::logic_error("psim: var(Γ) meets S");
            }
        sub_res += resolutions(gamma);
        Ctx g = psi;
        g.local.assign(n_ + 1, 0);
        for (int v : gv) g.local[v] = 1;
        std::vector<char> inSx = inS;
        inSx[x1] = 1;
        for (const ProofNode &nd : gamma.nodes) {
            if (nd.rule != Rule::Axiom || g.axiom.count(nd.clause)) continue;
            const Clause *src = nullptr;
            for (const Clause &C : tau_loc)
                if (del(C, inSx) == nd.clause) {
                    src = &C;
                    break;
                }
            if (!src) throw std::logic_error("psim: Γ axiom without a source clause");
            int cur = tau_star(*src);
            Clause body = src->without_var(x1);
            std::vector<Step> steps;
            std::vector<int> removable;
            for (Lit l : body.lits())
                if (inS[l.var()]) {
                    steps.push_back({{l.var(), 1 - l.sign(), false}, psi_units.at(~l)});
                    removable.push_back(l.var());
                }
            if (!removable.empty()) {
                std::map<int, int> value;
                std::set<int> need;
                for (Lit l : nd.clause.lits()) {
                    value[l.var()] = 1 - l.sign();
                    need.insert(l.var());
                }
                int t = materialize(psi, decide_through(psi, steps, value, need));
                for (Lit l : body.lits())
                    if (inS[l.var()]) cur = b_.learn(psi_units.at(~l), cur, t);
            }
            if (strip(b_.clause(cur), psi) != nd.clause) throw std::logic_error("psim: Γ axiom derived wrongly");
            g.axiom[nd.clause] = cur;
        }
        for (auto &[l, line] : level(gamma, g, depth + 1)) psi_units[l] = line;
        for (int v : gv) inS[v] = 1;
        S.insert(S.end(), gv.begin(), gv.end());
    }
    if (sub_res > resolutions(pi)) throw std::logic_error("psim: sub-proofs use more resolutions than Π");
    if (rep_) rep_->max_sub_resolutions = std::max(rep_->max_sub_resolutions, sub_res);

    // step 7: simulate Π|_{x1=1}, extended to all literals, over τ*
    Restriction r1(n_);
    r1.set(x1, 1);
    ResolutionProof P = all_lits_from_refutation(connected_core(restrict_proof(pi, r1).proof).proof);
    std::vector<int> line(P.size(), -1);
    std::map<Lit, int> exact;
    for (std::size_t v = 0; v < P.size(); ++v) {
        const ProofNode &nd = P.nodes[v];
        if (nd.rule == Rule::Axiom) {
            const Clause *src = nullptr;
            for (const Clause &C : tau_loc)
                if (!C.contains(X1) && C.without_var(x1) == nd.clause) {
                    src = &C;
                    break;
                }
            if (!src) throw std::logic_error("psim: Π|x1=1 axiom without a source clause");
            line[v] = tau_star(*src);
        } else {
            const Clause &A = P.clause(nd.p1), &B = P.clause(nd.p2);
            int y = nd.pivot;
            std::vector<Step> steps;
            std::set<int> seen;
            for (const Clause *c : {&A, &B}) {
                for (Lit l : c->lits()) {
                    if (l.var() == y || !seen.insert(l.var()).second) continue;
                    steps.push_back({{l.var(), 1 - l.sign(), false}, psi_units.at(~l)});
                }
                if (c == &A) {
                    Lit py = Lit::make(y, A.sign_of(y));
                    steps.push_back({{y, py.sign(), false}, psi_units.at(py)});
                    seen.insert(y);
                }
            }
            if (auto f = b_.find(b_.clause(line[nd.p1]).without_var(y).join(b_.clause(line[nd.p2]).without_var(y))))
                line[v] = *f;
            else
                line[v] = b_.learn(line[nd.p1], line[nd.p2], materialize(psi, steps));
        }
        if (strip(b_.clause(line[v]), psi) != P.clause(v)) throw std::logic_error("psim: step 7 clause mismatch");
        if (P.clause(v).width() == 1) exact.emplace(P.clause(v).lits()[0], line[v]);
    }

    // step 8: ¬x1 from an axiom holding ¬x1, under [x1 d=1, units from step 7]
    int nx1_line;
    {
        Clause C = find_axiom_with_literal(pi, x1, 1);
        std::vector<Step> steps{{{x1, 1, true}, -1}};
        for (Lit l : C.lits())
            if (l.var() != x1) steps.push_back({{l.var(), 1 - l.sign(), false}, exact.at(~l)});
        int t = materialize(ctx, steps);
        int cur = ax(C);
        for (Lit l : C.lits())
            if (l.var() != x1) cur = b_.learn(exact.at(~l), cur, t);
        nx1_line = cur;
    }
    if (strip(b_.clause(nx1_line), ctx) != Clause({NX1})) throw std::logic_error("psim: step 8 did not derive ¬x1");

    // step 9: drop x1 from the lifted units
    units[X1] = x1_line;
    units[NX1] = nx1_line;
    for (int y : V) {
        if (y == x1) continue;
        for (int a : {0, 1}) {
            Lit l = Lit::make(y, a);
            auto ex = exact.find(l);
            if (ex != exact.end()) {
                units[l] = ex->second;
                continue;
            }
            int u = psi_units.at(l);
            if (!b_.clause(u).contains(X1)) {
                units[l] = u;
                continue;
            }
            Clause want = b_.clause(u).without_var(x1);
            if (auto f = b_.find(want)) {
                units[l] = *f;
                continue;
            }
            int t = materialize(ctx, {{{x1, 0, true}, -1}, {{y, 1 - a, false}, psi_units.at(~l)}});
            units[l] = b_.learn(nx1_line, u, t);
        }
    }
    for (auto &[l, ln] : units)
        if (strip(b_.clause(ln), ctx) != Clause({l})) throw std::logic_error("psim: unit " + std::to_string(l.dimacs()) + " is not exact");
    return units;
}

}  // namespace

P0Proof psim(const ResolutionProof &input, const Cnf &tau, const VarOrder &order, PsimReport *report) {
    if (auto r = check_resolution(input, tau); !r.ok) throw std::invalid_argument("psim: invalid input proof: " + r.code);
    ResolutionProof pi = connected_core(contract_weakenings(input).proof).proof;
    if (report) {
        *report = {};
        report->input_size = static_cast<long>(input.size());
    }
    Psim sim(tau, order, report);
    Ctx top;
    top.local.assign(tau.num_vars() + 1, 0);
    top.lifted.assign(tau.num_vars() + 1, 0);
    for (int v : proof_vars(pi)) top.local[v] = 1;
    for (const ProofNode &nd : pi.nodes)
        if (nd.rule == Rule::Axiom) top.axiom[nd.clause] = sim.builder().axiom(nd.clause);
    auto units = sim.level(pi, top, 0);
    std::vector<int> V = proof_vars(pi);
    if (!V.empty() && !sim.builder().find(Clause())) {
        int x = *std::min_element(V.begin(), V.end(), [&](int a, int b) { return order.less(a, b); });
        int t = sim.materialize(top, {{{x, 1, true}, -1}});
        sim.builder().learn(units.at(Lit::make(x, 1)), units.at(Lit::make(x, 0)), t);
    }
    if (report)
        for (int v = 1; v <= tau.num_vars(); ++v)
            if (!std::binary_search(V.begin(), V.end(), v)) report->out_of_scope.push_back(v);
    P0Proof out = sim.builder().take();
    if (out.first_empty() < 0) throw std::logic_error("psim: output has no empty clause");
    if (auto r = check_p0(out, tau); !r.ok)
        throw std::logic_error("psim: output fails the checker: " + r.code + " at " + std::to_string(r.where) + " " + r.detail);
    if (report) report->output_size = static_cast<long>(out.size());
    return out;
}

}  // namespace pl
