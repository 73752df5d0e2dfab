#pragma once

#include <vector>

#include "prooflab/cdcl.hpp"
#include "prooflab/cnf.hpp"
#include "prooflab/p0.hpp"
#include "prooflab/resproof.hpp"

namespace pl {

// ---- half-ordered -> ordered ----

// Every resolution on a variable of rank i <= k has only resolutions on
// variables of rank < i between it and the sink.
bool ordered_up_to(const ResolutionProof &pi, const VarOrder &order, int k);

struct HalfToOrderedReport {
    long input_size = 0, output_size = 0;
    std::vector<long> stage_sizes;  // |Π_k| after each stage
    std::vector<long> dcl_sizes;    // |dcl(L_k)| at the start of each stage
    int rounds = 0;                 // total number of w ∈ M processed
};

// Throws std::invalid_argument on non half-ordered input and std::logic_error
// (naming the stage) when an internal audit fails.
ResolutionProof half_to_ordered(const ResolutionProof &pi, const VarOrder &order,
                                HalfToOrderedReport *report = nullptr);

// ---- CDCL <-> half-ordered ----

// Partial run from (𝕮, Λ) adding Res(a, b) to 𝕮; empty when the resolvent is
// already present.  If 0 becomes learnable on the way the run learns 0 instead.
std::vector<Action> half_to_cdcl(const CdclState &state, const Clause &a, const Clause &b, const VarOrder &order);
// Concatenates half_to_cdcl over the resolution steps of a half-ordered refutation.
RunTrace half_proof_to_run(const ResolutionProof &pi, const Cnf &tau, const VarOrder &order,
                           std::size_t *longest_fragment = nullptr);

ResolutionProof cdcl_to_half(const RunTrace &trace, const VarOrder &order);

// ---- CDCL <-> π-P0 ----

P0Proof p0_from_cdcl(const RunTrace &trace, const VarOrder &order);
RunTrace cdcl_from_p0(const P0Proof &proof, const Cnf &tau);

// Transplants a proof over ψ (ordered by order.without(x1), x1 = order.var_at(1))
// to tau: every axiom A becomes A or A∨x1, trails get the prefix [x1 d=0].
P0Proof lift(const P0Proof &proof, const Cnf &tau, const VarOrder &order);

// ---- variable deletion ----

struct DeletionReport {
    std::vector<char> deleted;  // per input node
    std::vector<char> surviving;
    int dummy_edges = 0;
    int s_resolutions = 0;  // t: resolutions on variables of S
    long input_size = 0, output_size = 0;
};

ResolutionProof delete_vars(const ResolutionProof &pi, const std::vector<int> &S, DeletionReport *report = nullptr);

// ---- weakening variant ----

struct WeakeningFragment {
    P0Proof proof;  // axioms Cx, Dx, E, the trail t, then the fragment
    int result = -1;
    long length = 0;  // lines added by the fragment itself
};

WeakeningFragment weakening_step(const Clause &cx, const Clause &dx, const Trail &t, const Clause &e,
                                 const VarOrder &order, int num_vars);
// Same construction inside an existing builder; returns the line of C∨D.
int weakening_step(P0Builder &b, int cx, int dx, int t, int e, long *length = nullptr);

P0Proof p0w_simulate(const ResolutionProof &pi, const Cnf &tau, const VarOrder &order);

// ---- PSIM ----

ResolutionProof all_lits_from_refutation(const ResolutionProof &pi);
// An axiom of pi holding x^(1-a) whose restriction takes part in refuting pi|_{x=a}.
Clause find_axiom_with_literal(const ResolutionProof &pi, int x, int a);

struct PsimReport {
    long input_size = 0, output_size = 0;
    int calls = 0, max_depth = 0;
    // per call: resolutions of Π against those of Π⁰, Π¹, ..., Π^T
    long max_sub_resolutions = 0;
    bool disjoint = true;
    std::vector<int> out_of_scope;  // variables of tau that Π never mentions
};

P0Proof psim(const ResolutionProof &pi, const Cnf &tau, const VarOrder &order, PsimReport *report = nullptr);

// ---- explicit refutations ----

// n-1 resolutions deriving x_n from Ind(n) without ¬x_n, eliminating x_1..x_{n-1} in π-decreasing order.
ResolutionProof ind_chain(int n, const VarOrder &order);
P0Proof refute_ind_xor2(int n, const VarOrder &order);
struct StoneReport {
    long stage3_lines = 0;
    long stage3_resolutions = 0;
    long stage3_not_half_ordered = 0;
};
P0Proof refute_stone(const PointedGraph &g, int m, StoneReport *report = nullptr);

}  // namespace pl
