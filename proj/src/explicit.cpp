#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>

#include "prooflab/transforms.hpp"

namespace pl {

ResolutionProof ind_chain(int n, const VarOrder &order) {
    if (n < 1) throw std::invalid_argument("ind_chain: n must be positive");
    ResolutionProof pi;
    pi.num_vars = n;
    // pos[v]: current clause holding x_v, neg[v]: current clause holding ¬x_v
    std::vector<int> pos(n + 1, -1), neg(n + 1, -1);
    pos[1] = pi.add_axiom(Clause::from_dimacs({1}));
    for (int i = 1; i < n; ++i) {
        int c = pi.add_axiom(Clause::from_dimacs({-i, i + 1}));
        neg[i] = c;
        pos[i + 1] = c;
    }
    std::vector<int> elim;
    for (int v = 1; v < n; ++v) elim.push_back(v);
    std::sort(elim.begin(), elim.end(), [&](int a, int b) { return order.rank(a) > order.rank(b); });
    for (int v : elim) {
        int r = pi.add_resolution(pos[v], neg[v], v);
        for (Lit l : pi.clause(r).lits())
            (l.sign() ? pos : neg)[l.var()] = r;
    }
    if (pi.clause(pos[n]) != Clause::from_dimacs({n})) throw std::logic_error("ind_chain: did not reach x_n");
    return pi;
}

namespace {

// Res(cside, dside) under π-ordered decisions; the planned clauses propagate
// as soon as they turn unit.  Values not fixed by the resolvent come from dflt.
int learn_planned(P0Builder &b, int cside, int dside, const std::vector<int> &plan,
                  const std::function<int(int)> &dflt) {
    const Clause A = b.clause(cside), B = b.clause(dside);
    auto x = unique_clash(A, B);
    if (!x) throw std::logic_error("explicit refutation: premises do not resolve");
    Clause res = *resolve(A, B, *x);
    if (auto f = b.find(res)) return *f;
    std::map<int, int> want;
    for (Lit l : res.lits()) want[l.var()] = 1 - l.sign();
    want[*x] = A.sign_of(*x);
    const int n = b.num_vars();
    Trail T;
    std::vector<int> R;
    Restriction rho(n);
    std::vector<char> used(plan.size(), 0);
    auto pending = [&] {
        for (auto &[v, val] : want)
            if (!rho.assigned(v)) return true;
        return false;
    };
    while (pending()) {
        bool fired = false;
        for (std::size_t p = 0; p < plan.size() && !fired; ++p) {
            if (used[p]) continue;
            const Clause c = b.clause(plan[p]);
            std::optional<Lit> open;
            int free = 0;
            bool sat = false;
            for (Lit l : c.lits()) {
                if (rho.satisfies(l)) sat = true;
                else if (!rho.assigned(l.var())) ++free, open = l;
            }
            if (sat || free != 1) continue;
            auto w = want.find(open->var());
            if (w != want.end() && w->second != open->sign())
                throw std::logic_error("explicit refutation: planned unit disagrees with the resolvent");
            T.push_back({open->var(), open->sign(), false});
            R.push_back(plan[p]);
            rho.set(open->var(), open->sign());
            used[p] = fired = true;
        }
        if (fired) continue;
        int v = b.order().first_unassigned(rho);
        if (v == 0) throw std::logic_error("explicit refutation: ran out of variables");
        auto w = want.find(v);
        int val = w != want.end() ? w->second : dflt(v);
        T.push_back({v, val, true});
        R.push_back(-1);
        rho.set(v, val);
    }
    return b.learn(cside, dside, b.trail(T, R));
}

}  // namespace

P0Proof refute_ind_xor2(int n, const VarOrder &order) {
    if (n < 1) throw std::invalid_argument("refute_ind_xor2: n must be positive");
    const XorMap map{n, 2};
    if (order.size() != 2 * n || !is_row_parallel(order, map) || !is_column_parallel(order, map))
        throw std::invalid_argument("refute_ind_xor2: order must be row- and column-parallel");
    P0Builder b(2 * n, order);
    auto y1 = [&](int i) { return map.var(i, 1); };
    auto y2 = [&](int i) { return map.var(i, 2); };
    auto dflt = [&](int v) { return map.col(v) == 1 ? 0 : 1; };
    auto learn = [&](int c, int d, const std::vector<int> &plan = {}) { return learn_planned(b, c, d, plan, dflt); };
    // clause lines forbidding a parity pattern on one row or on two consecutive rows
    auto forbid2 = [&](int r, int v1, int v2) {
        return b.axiom(Clause({Lit::make(y1(r), 1 - v1), Lit::make(y2(r), 1 - v2)}));
    };
    auto forbid4 = [&](int a, int al, int c, int be) {
        return b.axiom(Clause({Lit::make(y1(a), 1 - al), Lit::make(y2(a), al), Lit::make(y1(c), 1 - be),
                               Lit::make(y2(c), 1 - be)}));
    };

    // rows r_1..r_p; G0[c] forbids (c,c) at r_1, Gp[c] forbids (c,1-c) at r_p,
    // mid[s][α][β] forbids (α,1-α,β,β) on (r_s, r_{s+1})
    using Grid = std::array<std::array<int, 2>, 2>;
    std::vector<int> rows;
    for (int i = 1; i <= n; ++i) rows.push_back(i);
    std::array<int, 2> G0{forbid2(1, 0, 0), forbid2(1, 1, 1)};
    std::array<int, 2> Gp{forbid2(n, 0, 1), forbid2(n, 1, 0)};
    std::vector<Grid> mid;
    for (int i = 1; i < n; ++i) {
        Grid g;
        for (int al : {0, 1})
            for (int be : {0, 1}) g[al][be] = forbid4(i, al, i + 1, be);
        mid.push_back(g);
    }

    while (rows.size() > 1) {
        const int p = static_cast<int>(rows.size());
        int q = 0;
        for (int s = 1; s < p; ++s)
            if (order.rank(y1(rows[s])) > order.rank(y1(rows[q]))) q = s;
        // UL[α] turns into y²_{r_{q-1}} = 1-α once y¹_{r_{q-1}} = α and the earlier column-1 bits are 0
        std::array<int, 2> UL{-1, -1}, UR{-1, -1};
        if (q > 0)
            for (int al : {0, 1}) {
                if (q == 1) {
                    UL[al] = G0[al];
                    continue;
                }
                int F = G0[0];
                for (int s = 0; s + 1 < q; ++s) F = learn(F, mid[s][0][s + 1 == q - 1 ? al : 0]);
                UL[al] = F;
            }
        // UR[β] turns into y²_{r_{q+1}} = β once y¹_{r_{q+1}} = β and the later column-1 bits are 0
        if (q < p - 1)
            for (int be : {0, 1}) {
                if (q == p - 2) {
                    UR[be] = Gp[be];
                    continue;
                }
                int H = Gp[0];
                for (int s = p - 2; s > q; --s) H = learn(H, mid[s][s == q + 1 ? be : 0][0]);
                UR[be] = H;
            }

        if (q == 0) {
            std::array<int, 2> next;
            for (int be : {0, 1}) {
                std::array<int, 2> Rg;
                for (int g : {0, 1}) Rg[g] = learn(G0[g], mid[0][g][be]);
                next[be] = learn(Rg[0], Rg[1], {UR[be]});
            }
            G0 = next;
            mid.erase(mid.begin());
        } else if (q == p - 1) {
            std::array<int, 2> next;
            for (int al : {0, 1}) {
                std::array<int, 2> Rg;
                for (int g : {0, 1}) Rg[g] = learn(mid[q - 1][al][g], Gp[g]);
                next[al] = learn(Rg[0], Rg[1], {UL[al]});
            }
            Gp = next;
            mid.pop_back();
        } else {
            Grid next;
            for (int al : {0, 1})
                for (int be : {0, 1}) {
                    std::array<int, 2> Rg;
                    for (int g : {0, 1}) Rg[g] = learn(mid[q - 1][al][g], mid[q][g][be]);
                    next[al][be] = learn(Rg[0], Rg[1], {UL[al], UR[be]});
                }
            mid[q - 1] = next;
            mid.erase(mid.begin() + q);
        }
        rows.erase(rows.begin() + q);
    }
    std::array<int, 2> L;
    for (int c : {0, 1}) L[c] = learn(G0[c], Gp[c]);
    int root = learn(L[0], L[1]);
    if (!b.clause(root).empty()) throw std::logic_error("refute_ind_xor2: did not derive 0");
    P0Proof out = b.take();
    auto [tau, m] = xor_substitute(gen_induction(n), 2);
    if (auto r = check_p0(out, tau); !r.ok)
        throw std::logic_error("refute_ind_xor2: output fails the checker: " + r.code + " at " + std::to_string(r.where));
    return out;
}

P0Proof refute_stone(const PointedGraph &g0, int m, StoneReport *report) {
    g0.validate();
    if (m < g0.n) throw std::invalid_argument("refute_stone: needs m >= n");
    const PointedGraph g = g0.topologically_numbered() ? g0 : renumber_topologically(g0);
    const int n = g.n;
    const StoneMap s{n, m};
    const VarOrder order = order_stone(g, m);
    const Cnf tau = gen_stone(g, m);
    P0Builder b(n * m + m, order);
    auto neg = [](int v) { return Lit::make(v, 0); };
    auto pos = [](int v) { return Lit::make(v, 1); };
    auto type1 = [&](int i) {
        std::vector<Lit> c;
        for (int u = 1; u <= m; ++u) c.push_back(pos(s.P(i, u)));
        return b.axiom(Clause(c));
    };
    auto type3 = [&](int v) { return b.axiom(Clause({neg(s.P(g.sink, v)), neg(s.R(v))})); };

    // trail pieces: decide blocks hi..lo (P blocks come in decreasing vertex order)
    struct Piece {
        Trail t;
        std::vector<int> r;
        void dec(int v, int val) { t.push_back({v, val, true}), r.push_back(-1); }
        void unit(int v, int val, int line) { t.push_back({v, val, false}), r.push_back(line); }
    };
    auto blocks = [&](Piece &p, int hi, int lo) {
        for (int i = hi; i >= lo; --i)
            for (int u = 1; u <= m; ++u) p.dec(s.P(i, u), 1);
    };
    auto learn_if_new = [&](int c, int d, const std::function<Piece()> &mk) {
        Clause res = *resolve(b.clause(c), b.clause(d), *unique_clash(b.clause(c), b.clause(d)));
        if (auto f = b.find(res)) return *f;
        Piece p = mk();
        return b.learn(c, d, b.trail(p.t, p.r));
    };
    // Resolves type-1 of vertex w against rows[u] on P_{w,u}, u = m..1, with
    // [blocks n..w+1 at 1, `pre`, block w at 0 up to u-1, P_{w,u} d=1].
    auto chain = [&](int w, const std::vector<int> &against, const std::function<void(Piece &)> &pre) {
        int cur = type1(w);
        for (int u = m; u >= 1; --u)
            cur = learn_if_new(cur, against[u], [&] {
                Piece p;
                blocks(p, n, w + 1);
                pre(p);
                for (int z = 1; z < u; ++z) p.dec(s.P(w, z), 0);
                p.dec(s.P(w, u), 1);
                return p;
            });
        return cur;
    };

    // S[k][v] is ¬P_{k,v} ∨ R_v
    std::vector<std::vector<int>> S(n + 1, std::vector<int>(m + 1, -1));
    long stage3_begin = -1;
    for (int k = 1; k <= n; ++k) {
        if (g.is_source(k)) {
            for (int v = 1; v <= m; ++v) S[k][v] = b.axiom(Clause({neg(s.P(k, v)), pos(s.R(v))}));
            if (k != g.sink) continue;
        }
        const bool sink = k == g.sink;
        if (sink) stage3_begin = static_cast<long>(b.proof().size());
        std::vector<int> notP(m + 1, -1);  // sink: ¬P_{n,v}
        if (sink && g.is_source(k)) {
            for (int v = 1; v <= m; ++v)
                notP[v] = learn_if_new(type3(v), S[k][v], [&] {
                    Piece p;
                    blocks(p, n, 1);
                    p.unit(s.R(v), 0, type3(v));
                    return p;
                });
        } else {
            auto pr = g.preds(k);
            const int i = pr[0], j = pr[1];
            for (int v = 1; v <= m; ++v) {
                const int t3 = type3(v);
                // the conclusion for stone v: ¬P_{k,v} ∨ R_v, or ¬P_{n,v} at the sink
                auto fixed_v = [&](Piece &p) { p.unit(s.R(v), 0, t3); };
                std::vector<int> viaJ(m + 1, -1);
                for (int u = 1; u <= m; ++u) {
                    if (u == v) {
                        viaJ[u] = sink ? learn_if_new(t3, S[j][v], [&] {
                            Piece p;
                            blocks(p, n, i);
                            fixed_v(p);
                            return p;
                        })
                                       : S[j][v];
                        continue;
                    }
                    std::vector<int> viaI(m + 1, -1);
                    for (int t = 1; t <= m; ++t) {
                        if (t == v) {
                            viaI[t] = sink ? learn_if_new(t3, S[i][v], [&] {
                                Piece p;
                                blocks(p, n, i);
                                fixed_v(p);
                                return p;
                            })
                                           : S[i][v];
                            continue;
                        }
                        int cur = b.axiom(Clause({neg(s.P(i, t)), neg(s.R(t)), neg(s.P(j, u)), neg(s.R(u)),
                                                  neg(s.P(k, v)), pos(s.R(v))}));
                        Piece base;
                        blocks(base, n, i);
                        fixed_v(base);
                        Piece withU = base;
                        withU.unit(s.R(u), 1, S[j][u]);
                        cur = learn_if_new(S[i][t], cur, [&] {
                            Piece p = withU;
                            if (t != u) p.unit(s.R(t), 1, S[i][t]);
                            return p;
                        });
                        if (b.clause(cur).contains(neg(s.R(u)))) cur = learn_if_new(S[j][u], cur, [&] { return withU; });
                        if (sink) cur = learn_if_new(t3, cur, [&] { return base; });
                        viaI[t] = cur;
                    }
                    viaJ[u] = chain(i, viaI, sink ? std::function<void(Piece &)>([](Piece &) {}) : fixed_v);
                }
                int out = chain(j, viaJ, sink ? std::function<void(Piece &)>([](Piece &) {}) : fixed_v);
                (sink ? notP[v] : S[k][v]) = out;
            }
        }
        if (sink) {
            int cur = type1(k);
            for (int v = m; v >= 1; --v)
                cur = learn_if_new(cur, notP[v], [&] {
                    Piece p;
                    for (int z = 1; z < v; ++z) p.dec(s.P(k, z), 0);
                    p.dec(s.P(k, v), 1);
                    return p;
                });
            if (!b.clause(cur).empty()) throw std::logic_error("refute_stone: did not derive 0");
        }
    }
    P0Proof out = b.take();
    if (auto r = check_p0(out, tau); !r.ok)
        throw std::logic_error("refute_stone: output fails the checker: " + r.code + " at " + std::to_string(r.where));
    StoneReport rep;
    rep.stage3_lines = static_cast<long>(out.size()) - stage3_begin;
    for (std::size_t k = static_cast<std::size_t>(stage3_begin); k < out.size(); ++k) {
        const P0Line &l = out.lines[k];
        if (l.rule != P0Rule::Learning) continue;
        const Clause &a = out.lines[l.c1].clause, &c = out.lines[l.c2].clause;
        ++rep.stage3_resolutions;
        if (!step_half_ordered(a, c, *unique_clash(a, c), order)) ++rep.stage3_not_half_ordered;
    }
    if (report) *report = rep;
    return out;
}

}  // namespace pl
