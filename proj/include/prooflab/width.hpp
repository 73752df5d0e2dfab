#pragma once

#include <optional>
#include <string>

#include "prooflab/cdcl.hpp"
#include "prooflab/cnf.hpp"
#include "prooflab/p0.hpp"
#include "prooflab/resproof.hpp"

namespace pl {

// The first min(|t|, k) assignments are decisions on π(1), π(2), ... in that order.
bool is_k_trivial(const Trail &t, const VarOrder &order, int k);

struct RobustnessCertificate {
    std::string formula;  // content hash of the CNF
    VarOrder order;
    int k = 0;
    long checked = 0, total = 0;
    bool complete = false;  // every restriction was examined
    bool verdict = false;   // meaningful as "robust" only when complete
    std::optional<Restriction> counterexample;
    std::string reason;     // which property the counterexample breaks

    double coverage() const { return total ? static_cast<double>(checked) / static_cast<double>(total) : 1.0; }
    std::string json() const;
};

// Every restriction with domain inside Var_π^k plus at most one other variable
// leaves a minimally unsatisfiable formula in which each assigned variable
// still occurs in some unsatisfied clause.
RobustnessCertificate check_robust(const Cnf &tau, const VarOrder &order, int k, long budget = 2000000);

// The two structural facts behind the width lower bound, at the first
// almost-w-small clause C: all earlier trails are (w+1)-trivial and
// Var_π^w ⊆ var(C).  With require_refutation the width must also reach w.
CheckReport audit_width_lower_bound(const P0Proof &proof, const VarOrder &order, int w, bool require_refutation = true);

struct CdclWidthAudit {
    CheckReport report;
    bool successful = false;
    long max_learned_width = 0;
};

// Learned clauses stay within the WIDTH bound; the run goes through
// p0_from_cdcl and the structural audit for robustness parameter w_robust.  A
// successful run while w_robust > w_amend is reported as a violation.
CdclWidthAudit audit_cdcl_width(const RunTrace &trace, const VarOrder &order, int w_amend, int w_robust);

}  // namespace pl
