#include "prooflab/width.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "json.hpp"
#include "prooflab/oracle.hpp"
#include "prooflab/transforms.hpp"

namespace pl {

bool is_k_trivial(const Trail &t, const VarOrder &order, int k) {
    const std::size_t s = std::min<std::size_t>(t.size(), static_cast<std::size_t>(std::max(k, 0)));
    for (std::size_t l = 0; l < s; ++l)
        if (!t[l].decision || static_cast<int>(l) >= order.size() || t[l].var != order.var_at(static_cast<int>(l) + 1))
            return false;
    return true;
}

std::string RobustnessCertificate::json() const {
    nlohmann::json j;
    j["formula"] = formula;
    j["order"] = order.sequence();
    j["k"] = k;
    j["checked"] = checked;
    j["total"] = total;
    j["coverage"] = coverage();
    j["complete"] = complete;
    j["robust"] = verdict;
    if (counterexample) {
        nlohmann::json rho = nlohmann::json::array();
        for (int v : counterexample->domain()) rho.push_back(counterexample->get(v) ? v : -v);
        j["counterexample"] = rho;
        j["reason"] = reason;
    } else if (!reason.empty()) {
        j["reason"] = reason;
    }
    return j.dump();
}

namespace {

bool minimally_unsat(const Cnf &f) {
    if (dpll_sat(f)) return false;
    const auto &cls = f.clauses();
    for (std::size_t i = 0; i < cls.size(); ++i) {
        std::vector<Clause> rest;
        rest.reserve(cls.size() - 1);
        for (std::size_t j = 0; j < cls.size(); ++j)
            if (j != i) rest.push_back(cls[j]);
        if (!dpll_sat(Cnf(f.num_vars(), std::move(rest)))) return false;
    }
    return true;
}

}  // namespace

RobustnessCertificate check_robust(const Cnf &tau, const VarOrder &order, int k, long budget) {
    RobustnessCertificate cert;
    cert.formula = content_hash(tau);
    cert.order = order;
    cert.k = k;
    if (k < 0 || k > order.size()) throw std::invalid_argument("check_robust: k outside [0, |order|]");
    const int n = tau.num_vars();
    std::vector<int> inner, outer;
    for (int l = 1; l <= k; ++l) inner.push_back(order.var_at(l));
    for (int v = 1; v <= n; ++v)
        if (order.rank(v) == 0 || order.rank(v) > k) outer.push_back(v);
    long per = 1 + 2 * static_cast<long>(outer.size());
    cert.total = per;
    for (std::size_t i = 0; i < inner.size(); ++i) {
        if (cert.total > (1L << 52) / 3) throw std::invalid_argument("check_robust: restriction space too large");
        cert.total *= 3;
    }
    std::map<std::vector<Clause>, bool> memo;
    std::vector<int> digit(inner.size(), 0);  // 0 unassigned, 1 -> 0, 2 -> 1
    for (;;) {
        for (long o = 0; o < per; ++o) {
            if (cert.checked >= budget) {
                cert.reason = "budget exhausted";
                return cert;
            }
            Restriction rho(n);
            for (std::size_t i = 0; i < inner.size(); ++i)
                if (digit[i]) rho.set(inner[i], digit[i] - 1);
            if (o > 0) rho.set(outer[(o - 1) / 2], static_cast<int>((o - 1) % 2));
            ++cert.checked;
            for (int v : rho.domain()) {
                bool seen = std::any_of(tau.clauses().begin(), tau.clauses().end(),
                                        [&](const Clause &c) { return c.has_var(v) && !satisfied(c, rho); });
                if (!seen) {
                    cert.counterexample = rho;
                    cert.reason = "x" + std::to_string(v) + " occurs in no unsatisfied clause";
                    return cert;
                }
            }
            Cnf r = restrict_cnf(tau, rho);
            auto it = memo.find(r.clauses());
            bool ok = it != memo.end() ? it->second : memo.emplace(r.clauses(), minimally_unsat(r)).first->second;
            if (!ok) {
                cert.counterexample = rho;
                cert.reason = "restricted formula is not minimally unsatisfiable";
                return cert;
            }
        }
        std::size_t i = 0;
        while (i < digit.size() && digit[i] == 2) digit[i++] = 0;
        if (i == digit.size()) break;
        ++digit[i];
    }
    cert.complete = true;
    cert.verdict = true;
    return cert;
}

CheckReport audit_width_lower_bound(const P0Proof &proof, const VarOrder &order, int w, bool require_refutation) {
    if (w > order.size()) throw std::invalid_argument("audit_width_lower_bound: w exceeds the number of variables");
    CheckReport ok;
    ok.size = static_cast<long>(proof.size());
    ok.width = p0_width(proof);
    if (w <= 0) return ok;
    long first = -1;
    for (std::size_t k = 0; k < proof.lines.size(); ++k) {
        const P0Line &l = proof.lines[k];
        if (!l.is_trail() && is_almost_k_small(l.clause, order, w)) {
            first = static_cast<long>(k);
            break;
        }
    }
    if (first < 0) {
        if (require_refutation) return CheckReport::fail("no-almost-small-clause", -1, "the proof never reaches 0");
        return ok;
    }
    for (long k = 0; k < first; ++k) {
        const P0Line &l = proof.lines[k];
        if (l.is_trail() && !is_k_trivial(l.trail, order, w + 1))
            return CheckReport::fail("trail-not-trivial", k + 1, trail_str(l.trail) + " precedes the first almost-small clause");
    }
    const Clause &c = proof.lines[first].clause;
    for (int l = 1; l <= w; ++l)
        if (!c.has_var(order.var_at(l)))
            return CheckReport::fail("var-not-covered", first + 1,
                                     "x" + std::to_string(order.var_at(l)) + " missing from " + c.str());
    if (require_refutation) {
        if (proof.first_empty() < 0) return CheckReport::fail("not-a-refutation", -1, "no clause line holds 0");
        if (ok.width < w) return CheckReport::fail("width-below-bound", -1, "width " + std::to_string(ok.width));
    }
    return ok;
}

CdclWidthAudit audit_cdcl_width(const RunTrace &trace, const VarOrder &order, int w_amend, int w_robust) {
    CdclWidthAudit a;
    for (std::size_t i = 0; i < trace.actions.size(); ++i) {
        const Action &act = trace.actions[i];
        if (act.kind != ActionKind::Learn) continue;
        a.max_learned_width = std::max<long>(a.max_learned_width, static_cast<long>(act.clause.width()));
        if (static_cast<int>(act.clause.width()) > w_amend) {
            a.report = CheckReport::fail("width-amendment", static_cast<long>(i) + 1, act.clause.str());
            return a;
        }
        if (act.clause.empty()) a.successful = true;
    }
    if (trace.initial.has_empty()) a.successful = true;
    P0Proof p = p0_from_cdcl(trace, order);
    a.report = audit_width_lower_bound(p, order, w_robust, a.successful);
    if (a.report.ok && a.successful && w_robust > w_amend)
        a.report = CheckReport::fail("impossible-success", -1,
                                     "a run within WIDTH-" + std::to_string(w_amend) + " refuted a " +
                                         std::to_string(w_robust) + "-robust formula");
    return a;
}

}  // namespace pl
