#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pl {

// A literal x^a packed as 2*var + a.  a = 1 is the positive literal.
struct Lit {
    int code = 0;

    static Lit make(int var, int sign) { return Lit{2 * var + (sign ? 1 : 0)}; }
    static Lit from_dimacs(int d) { return d > 0 ? make(d, 1) : make(-d, 0); }

    int var() const { return code >> 1; }
    int sign() const { return code & 1; }
    int dimacs() const { return sign() ? var() : -var(); }
    Lit operator~() const { return Lit{code ^ 1}; }

    auto operator<=>(const Lit &) const = default;
};

class Clause {
public:
    Clause() = default;
    // Throws std::invalid_argument on a complementary pair.
    explicit Clause(std::vector<Lit> lits);
    static Clause from_dimacs(const std::vector<int> &lits);

    const std::vector<Lit> &lits() const { return lits_; }
    std::size_t width() const { return lits_.size(); }
    bool empty() const { return lits_.empty(); }
    bool contains(Lit l) const;
    // -1 if the variable is absent, otherwise the sign it occurs with.
    int sign_of(int var) const;
    bool has_var(int var) const { return sign_of(var) >= 0; }
    int max_var() const { return lits_.empty() ? 0 : lits_.back().var(); }
    std::vector<int> vars() const;

    bool subset_of(const Clause &o) const;
    Clause without_var(int var) const;
    Clause with(Lit l) const;  // throws if ~l is present
    Clause join(const Clause &o) const;  // throws on clash

    std::vector<int> to_dimacs() const;
    std::string str() const;

    auto operator<=>(const Clause &o) const { return lits_ <=> o.lits_; }
    bool operator==(const Clause &o) const { return lits_ == o.lits_; }

private:
    std::vector<Lit> lits_;  // sorted by code, hence by variable
};

struct ClauseHash {
    std::size_t operator()(const Clause &c) const;
};

// The variable both clauses hold with opposite signs, if it is the only such variable.
std::optional<int> unique_clash(const Clause &a, const Clause &b);
// Res(a, b) on the given pivot; nullopt if the pair is not resolvable on it.
std::optional<Clause> resolve(const Clause &a, const Clause &b, int pivot);
// a ∘^x b as used in learning: Res if b holds the complement of a literal of a on x, else a.
Clause circ(const Clause &a, const Clause &b, int pivot);

class Cnf {
public:
    Cnf() = default;
    Cnf(int num_vars, std::vector<Clause> clauses);  // canonicalises

    int num_vars() const { return n_; }
    const std::vector<Clause> &clauses() const { return cls_; }
    std::size_t size() const { return cls_.size(); }
    bool contains(const Clause &c) const;
    bool has_empty() const { return !cls_.empty() && cls_.front().empty(); }
    std::vector<int> used_vars() const;

    std::vector<std::string> comments;

private:
    int n_ = 0;
    std::vector<Clause> cls_;
};

// FNV-style hash of the canonical clause list, printed as 16 hex digits.
std::string content_hash(const Cnf &tau);

// Partial assignment indexed by variable; -1 means unassigned.
class Restriction {
public:
    Restriction() = default;
    explicit Restriction(int n) : val_(n + 1, -1) {}

    int num_vars() const { return static_cast<int>(val_.size()) - 1; }
    int get(int var) const { return var < static_cast<int>(val_.size()) ? val_[var] : -1; }
    bool assigned(int var) const { return get(var) >= 0; }
    void set(int var, int value);
    void unset(int var) { val_.at(var) = -1; }
    std::vector<int> domain() const;

    bool satisfies(Lit l) const { return get(l.var()) == l.sign(); }
    bool falsifies(Lit l) const { return get(l.var()) == 1 - l.sign(); }

private:
    std::vector<int8_t> val_;
};

// nullopt when rho satisfies c; otherwise c with falsified literals removed.
std::optional<Clause> restrict_clause(const Clause &c, const Restriction &rho);
bool falsified(const Clause &c, const Restriction &rho);
bool satisfied(const Clause &c, const Restriction &rho);
Cnf restrict_cnf(const Cnf &tau, const Restriction &rho);

// Variables listed from π-smallest to π-largest.  The order may cover only a
// subset of [1,n]; rank() is 0 outside the domain.
class VarOrder {
public:
    VarOrder() = default;
    static VarOrder identity(int n);
    static VarOrder from_sequence(int n, std::vector<int> seq);
    // perm[i-1] = π(i), the rank of variable i.
    static VarOrder from_ranks(const std::vector<int> &perm);

    int num_vars() const { return n_; }
    int size() const { return static_cast<int>(seq_.size()); }
    int rank(int var) const { return var < static_cast<int>(pos_.size()) ? pos_[var] : 0; }
    int var_at(int k) const { return seq_.at(k - 1); }
    const std::vector<int> &sequence() const { return seq_; }
    bool contains(int var) const { return rank(var) > 0; }
    bool less(int x, int y) const { return rank(x) < rank(y); }
    // π-smallest variable of the domain not assigned by rho, or 0.
    int first_unassigned(const Restriction &rho) const;
    VarOrder without(int var) const;
    std::vector<int> ranks() const;  // π(1..n), only for total orders

private:
    int n_ = 0;
    std::vector<int> seq_;
    std::vector<int> pos_;
};

bool is_k_small(const Clause &c, const VarOrder &order, int k);
bool is_almost_k_small(const Clause &c, const VarOrder &order, int k);
// max rank of a variable of c (0 for the empty clause)
int max_rank(const Clause &c, const VarOrder &order);

struct PointedGraph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;
    int sink = 0;

    std::vector<int> preds(int v) const;
    std::vector<int> succs(int v) const;
    bool is_source(int v) const { return preds(v).empty(); }
    bool topologically_numbered() const;
    // Throws std::invalid_argument naming the broken invariant.
    void validate() const;
};

// y_{i,j} ↦ (i-1)*cols + j: the copies of x_i are consecutive.
struct XorMap {
    int rows = 0, cols = 0;
    int var(int i, int j) const { return (i - 1) * cols + j; }
    int row(int v) const { return (v - 1) / cols + 1; }
    int col(int v) const { return (v - 1) % cols + 1; }
};

Cnf gen_induction(int n);
std::pair<Cnf, XorMap> xor_substitute(const Cnf &tau, int r);
Cnf gen_random_kcnf(int n, int m, int k, uint64_t seed);

// Stone variables: P_{i,u} ↦ (i-1)*m + u, R_v ↦ n*m + v.
struct StoneMap {
    int n = 0, m = 0;
    int P(int i, int u) const { return (i - 1) * m + u; }
    int R(int v) const { return n * m + v; }
};
Cnf gen_stone(const PointedGraph &g, int m);
PointedGraph gen_pointed_graph(int n, uint64_t seed);
PointedGraph renumber_topologically(const PointedGraph &g);

VarOrder order_row_then_column(int n, int r);
VarOrder order_stone(const PointedGraph &g, int m);
bool is_row_parallel(const VarOrder &order, const XorMap &map);
bool is_column_parallel(const VarOrder &order, const XorMap &map);

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Cnf read_dimacs(std::istream &in);
void write_dimacs(std::ostream &out, const Cnf &tau);
Cnf read_dimacs_file(const std::string &path);
void write_dimacs_file(const std::string &path, const Cnf &tau);

// `p order n` + π(1..n), or the token `identity` (needs n).
VarOrder read_order(std::istream &in, int n_hint = 0);
void write_order(std::ostream &out, const VarOrder &order);
VarOrder read_order_file(const std::string &path, int n_hint = 0);

PointedGraph read_graph(std::istream &in);
void write_graph(std::ostream &out, const PointedGraph &g);

}  // namespace pl
