#include "prooflab/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <queue>
#include <set>
#include <unordered_map>

namespace pl {

namespace {

struct Derived {
    Clause c;
    int p1, p2, pivot;
};

ResolutionProof extract(const std::vector<Derived> &db, int root, int n) {
    std::vector<char> keep(db.size(), 0);
    keep[root] = 1;
    for (int v = root; v >= 0; --v) {
        if (!keep[v] || db[v].p1 < 0) continue;
        keep[db[v].p1] = keep[db[v].p2] = 1;
    }
    ResolutionProof pi;
    pi.num_vars = n;
    std::vector<int> id(db.size(), -1);
    for (int v = 0; v <= root; ++v) {
        if (!keep[v]) continue;
        if (db[v].p1 < 0) id[v] = pi.add_axiom(db[v].c);
        else id[v] = pi.add_resolution(id[db[v].p1], id[db[v].p2], db[v].pivot);
    }
    return pi;
}

uint64_t signature(const Clause &c) {
    uint64_t s = 0;
    for (Lit l : c.lits()) s |= uint64_t{1} << (l.code % 64);
    return s;
}

}  // namespace

SaturationResult saturate(const Cnf &tau, const OracleBudget &budget) {
    using clock = std::chrono::steady_clock;
    auto start = clock::now();
    SaturationResult res;
    std::vector<Derived> db;
    std::unordered_map<Clause, int, ClauseHash> seen;
    std::vector<uint64_t> sig;
    // forward subsumption: a resolvent that contains a stored clause adds nothing
    auto subsumed = [&](const Clause &r) {
        uint64_t sr = signature(r);
        for (std::size_t i = 0; i < db.size(); ++i)
            if ((sig[i] & ~sr) == 0 && db[i].c.width() <= r.width() &&
                std::includes(r.lits().begin(), r.lits().end(), db[i].c.lits().begin(), db[i].c.lits().end()))
                return true;
        return false;
    };
    using Item = std::pair<std::size_t, int>;  // (width, index)
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    for (const Clause &c : tau.clauses()) {
        seen.emplace(c, static_cast<int>(db.size()));
        db.push_back({c, -1, -1, 0});
        sig.push_back(signature(c));
        if (c.empty()) {
            res.proof = extract(db, static_cast<int>(db.size()) - 1, tau.num_vars());
            res.clauses = static_cast<long>(db.size());
            return res;
        }
        queue.push({c.width(), static_cast<int>(db.size()) - 1});
    }
    std::vector<int> processed;
    long steps = 0;
    while (!queue.empty()) {
        int g = queue.top().second;
        queue.pop();
        for (int h : processed) {
            if (++steps % 4096 == 0 &&
                std::chrono::duration<double>(clock::now() - start).count() > budget.max_seconds) {
                res.clauses = static_cast<long>(db.size());
                return res;
            }
            auto x = unique_clash(db[g].c, db[h].c);
            if (!x) continue;
            Clause r = *resolve(db[g].c, db[h].c, *x);
            if (static_cast<int>(r.width()) > budget.max_width || seen.count(r) || subsumed(r)) continue;
            seen.emplace(r, static_cast<int>(db.size()));
            db.push_back({r, h, g, *x});
            sig.push_back(signature(r));
            if (r.empty()) {
                res.proof = extract(db, static_cast<int>(db.size()) - 1, tau.num_vars());
                res.clauses = static_cast<long>(db.size());
                return res;
            }
            if (static_cast<long>(db.size()) > budget.max_clauses) {
                res.clauses = static_cast<long>(db.size());
                return res;
            }
            queue.push({r.width(), static_cast<int>(db.size()) - 1});
        }
        processed.push_back(g);
    }
    res.saturated = budget.max_width >= tau.num_vars();
    res.clauses = static_cast<long>(db.size());
    return res;
}

namespace {

bool dpll(const std::vector<Clause> &cls, Restriction &rho, int n) {
    // unit propagation to fixpoint, remembering what to undo
    std::vector<int> trail;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const Clause &c : cls) {
            int open = 0;
            Lit last{};
            bool sat = false;
            for (Lit l : c.lits()) {
                if (rho.satisfies(l)) {
                    sat = true;
                    break;
                }
                if (!rho.falsifies(l)) {
                    ++open;
                    last = l;
                }
            }
            if (sat) continue;
            if (open == 0) {
                for (int v : trail) rho.unset(v);
                return false;
            }
            if (open == 1) {
                rho.set(last.var(), last.sign());
                trail.push_back(last.var());
                changed = true;
            }
        }
    }
    int pick = 0;
    for (const Clause &c : cls) {
        if (satisfied(c, rho)) continue;
        for (Lit l : c.lits())
            if (!rho.assigned(l.var())) {
                pick = l.var();
                break;
            }
        if (pick) break;
    }
    if (!pick) return true;
    for (int val : {1, 0}) {
        rho.set(pick, val);
        if (dpll(cls, rho, n)) return true;
        rho.unset(pick);
    }
    for (int v : trail) rho.unset(v);
    return false;
}

}  // namespace

std::optional<Restriction> dpll_model(const Cnf &tau) {
    Restriction rho(tau.num_vars());
    if (!dpll(tau.clauses(), rho, tau.num_vars())) return std::nullopt;
    for (int v = 1; v <= tau.num_vars(); ++v)
        if (!rho.assigned(v)) rho.set(v, 0);
    return rho;
}

bool dpll_sat(const Cnf &tau) { return dpll_model(tau).has_value(); }

std::optional<int> min_ordered_width(const Cnf &tau, const VarOrder &order, const OracleBudget &budget) {
    using clock = std::chrono::steady_clock;
    auto start = clock::now();
    for (int w = 0; w <= tau.num_vars(); ++w) {
        std::set<Clause> have;
        std::vector<Clause> list;
        for (const Clause &c : tau.clauses())
            if (static_cast<int>(c.width()) <= w && have.insert(c).second) list.push_back(c);
        if (have.count(Clause())) return w;
        for (std::size_t i = 0; i < list.size(); ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                auto x = unique_clash(list[i], list[j]);
                if (!x || !step_ordered(list[i], list[j], *x, order)) continue;
                Clause r = *resolve(list[i], list[j], *x);
                if (static_cast<int>(r.width()) > w || !have.insert(r).second) continue;
                if (r.empty()) return w;
                list.push_back(r);
                if (static_cast<long>(list.size()) > budget.max_clauses ||
                    std::chrono::duration<double>(clock::now() - start).count() > budget.max_seconds)
                    return std::nullopt;
            }
        }
    }
    return std::nullopt;
}

}  // namespace pl
