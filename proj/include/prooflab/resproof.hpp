#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "prooflab/cnf.hpp"

namespace pl {

enum class Rule { Axiom, Resolution, Weakening };

struct ProofNode {
    Clause clause;
    Rule rule = Rule::Axiom;
    int p1 = -1, p2 = -1;  // parent indices; p2 only for resolution
    int pivot = 0;
};

// Nodes are stored in topological order and referenced by index.
struct ResolutionProof {
    int num_vars = 0;
    std::vector<ProofNode> nodes;
    bool allow_weakening = false;

    int add_axiom(const Clause &c);
    // Computes the resolvent; throws std::invalid_argument if the pair does not resolve on pivot.
    int add_resolution(int a, int b, int pivot);
    int add_weakening(int parent, const Clause &c);

    const Clause &clause(int v) const { return nodes[v].clause; }
    std::size_t size() const { return nodes.size(); }
    // index of the first node labelled 0, or -1
    int first_empty() const;
    std::vector<std::vector<int>> children() const;
};

struct CheckReport {
    bool ok = true;
    std::string code;    // machine-readable reason, empty when ok
    long where = -1;     // 1-based line/node/step id of the first violation
    std::string detail;
    long size = 0;
    long width = 0;

    static CheckReport fail(std::string code, long where, std::string detail);
    std::string json() const;
};

CheckReport check_resolution(const ResolutionProof &pi, const Cnf &tau);
CheckReport check_ordered(const ResolutionProof &pi, const VarOrder &order);
CheckReport check_half_ordered(const ResolutionProof &pi, const VarOrder &order);

// True when every variable of c other than pivot is π-below pivot.
bool side_below(const Clause &c, int pivot, const VarOrder &order);
bool step_half_ordered(const Clause &a, const Clause &b, int pivot, const VarOrder &order);
bool step_ordered(const Clause &a, const Clause &b, int pivot, const VarOrder &order);

long proof_size(const ResolutionProof &pi);
long proof_width(const ResolutionProof &pi);

using NodeSet = std::vector<char>;  // membership mask over node indices

NodeSet ucl(const ResolutionProof &pi, const NodeSet &s);
NodeSet dcl(const ResolutionProof &pi, const NodeSet &s);
NodeSet singleton(const ResolutionProof &pi, int v);
bool is_parent_complete(const ResolutionProof &pi, const NodeSet &s);
bool is_path_complete(const ResolutionProof &pi, const NodeSet &s);
std::vector<int> min_nodes(const ResolutionProof &pi, const NodeSet &s);
std::vector<int> max_nodes(const ResolutionProof &pi, const NodeSet &s);

// A proof together with old-index -> new-index correspondence (-1 = dropped).
struct MappedProof {
    ResolutionProof proof;
    std::vector<int> map;
};

// Induced subproof; nodes of s without parents in s become axioms.
MappedProof subproof_on(const ResolutionProof &pi, const NodeSet &s);
MappedProof connected_core(const ResolutionProof &pi);
// map[v] = -1 when rho satisfies the restricted clause of v.
MappedProof restrict_proof(const ResolutionProof &pi, const Restriction &rho);
// map[v] = the representative v* with c(v*) ⊆ c(v).
MappedProof contract_weakenings(const ResolutionProof &pi);

bool is_connected_refutation(const ResolutionProof &pi);
std::vector<int> proof_vars(const ResolutionProof &pi);
Cnf proof_axioms(const ResolutionProof &pi);

ResolutionProof read_proof(std::istream &in);
void write_proof(std::ostream &out, const ResolutionProof &pi);
void write_dot(std::ostream &out, const ResolutionProof &pi);

}  // namespace pl
