#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "prooflab/cdcl.hpp"
#include "prooflab/cnf.hpp"
#include "prooflab/resproof.hpp"

namespace pl {

enum class P0Rule { Axiom, Decision, Unit, Learning, Weakening };

struct P0Line {
    P0Rule rule = P0Rule::Axiom;
    Clause clause;         // clause lines
    Trail trail;           // trail lines, stored in full
    int parent = -1;       // trail lines: premise trail, -1 = Λ
    int c1 = -1, c2 = -1;  // unit: c1 = clause; learning: premises; weakening: c1
    int via = -1;          // learning: trail line

    bool is_trail() const { return rule == P0Rule::Decision || rule == P0Rule::Unit; }
};

struct P0Proof {
    int num_vars = 0;
    VarOrder order;
    std::vector<P0Line> lines;
    bool allow_weakening = false;

    std::size_t size() const { return lines.size(); }
    int first_empty() const;  // clause line holding 0, or -1
    std::optional<int> find_clause(const Clause &c) const;
};

// Each line is checked against the rules of the system; `where` is the 1-based line id.
CheckReport check_p0(const P0Proof &proof, const Cnf &tau);
long p0_width(const P0Proof &proof);
ResolutionProof p0_strip_to_halfordered(const P0Proof &proof);

// Incremental construction.  Every rule application is validated on the spot
// and a std::logic_error names the broken side condition; clause and trail
// lines are deduplicated by content.
class P0Builder {
public:
    P0Builder(int num_vars, VarOrder order, bool allow_weakening = false);

    int axiom(const Clause &c);
    int decide(int trail, int var, int val);
    int propagate(int trail, int var, int val, int clause_line);
    // Learning rule on the unique clashing variable of the two premises.
    int learn(int c1, int c2, int trail);
    int weaken(int c, const Clause &target);

    // Builds (or finds) the trail with the given content; units name their clause line.
    int trail(const Trail &t, const std::vector<int> &reasons);

    const Clause &clause(int line) const { return proof_.lines[line].clause; }
    const Trail &trail_of(int line) const;
    std::optional<int> find(const Clause &c) const;
    std::optional<int> find_trail(const Trail &t) const;
    const P0Proof &proof() const { return proof_; }
    P0Proof take() { return std::move(proof_); }
    int num_vars() const { return proof_.num_vars; }
    const VarOrder &order() const { return proof_.order; }

private:
    int add_trail(int parent, Assignment a, int clause_line);
    P0Proof proof_;
    std::map<Clause, int> clauses_;
    std::map<Trail, int> trails_;
};

P0Proof read_p0(std::istream &in, const std::optional<VarOrder> &order);
void write_p0(std::ostream &out, const P0Proof &proof);

}  // namespace pl
