#include "prooflab/cnf.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

namespace pl {

Clause::Clause(std::vector<Lit> lits) : lits_(std::move(lits)) {
    std::sort(lits_.begin(), lits_.end());
    lits_.erase(std::unique(lits_.begin(), lits_.end()), lits_.end());
    for (std::size_t i = 0; i + 1 < lits_.size(); ++i)
        if (lits_[i].var() == lits_[i + 1].var())
            throw std::invalid_argument("clause holds x and ~x for variable " +
                                        std::to_string(lits_[i].var()));
    for (Lit l : lits_)
        if (l.var() < 1) throw std::invalid_argument("variable index must be positive");
}

Clause Clause::from_dimacs(const std::vector<int> &lits) {
    std::vector<Lit> v;
    v.reserve(lits.size());
    for (int d : lits) v.push_back(Lit::from_dimacs(d));
    return Clause(std::move(v));
}

bool Clause::contains(Lit l) const { return std::binary_search(lits_.begin(), lits_.end(), l); }

int Clause::sign_of(int var) const {
    auto it = std::lower_bound(lits_.begin(), lits_.end(), Lit::make(var, 0));
    if (it != lits_.end() && it->var() == var) return it->sign();
    return -1;
}

std::vector<int> Clause::vars() const {
    std::vector<int> v;
    v.reserve(lits_.size());
    for (Lit l : lits_) v.push_back(l.var());
    return v;
}

bool Clause::subset_of(const Clause &o) const {
    return std::includes(o.lits_.begin(), o.lits_.end(), lits_.begin(), lits_.end());
}

Clause Clause::without_var(int var) const {
    Clause c;
    c.lits_.reserve(lits_.size());
    for (Lit l : lits_)
        if (l.var() != var) c.lits_.push_back(l);
    return c;
}

Clause Clause::with(Lit l) const {
    if (contains(~l)) throw std::invalid_argument("clash adding literal");
    Clause c = *this;
    auto it = std::lower_bound(c.lits_.begin(), c.lits_.end(), l);
    if (it == c.lits_.end() || *it != l) c.lits_.insert(it, l);
    return c;
}

Clause Clause::join(const Clause &o) const {
    std::vector<Lit> v;
    v.reserve(lits_.size() + o.lits_.size());
    std::set_union(lits_.begin(), lits_.end(), o.lits_.begin(), o.lits_.end(),
                   std::back_inserter(v));
    return Clause(std::move(v));
}

std::vector<int> Clause::to_dimacs() const {
    std::vector<int> v;
    for (Lit l : lits_) v.push_back(l.dimacs());
    return v;
}

std::string Clause::str() const {
    if (lits_.empty()) return "0";
    std::string s;
    for (Lit l : lits_) {
        if (!s.empty()) s += ' ';
        s += std::to_string(l.dimacs());
    }
    return s;
}

std::size_t ClauseHash::operator()(const Clause &c) const {
    std::size_t h = 1469598103934665603ull;
    for (Lit l : c.lits()) {
        h ^= static_cast<std::size_t>(l.code) + 0x9e3779b97f4a7c15ull;
        h *= 1099511628211ull;
    }
    return h;
}

std::optional<int> unique_clash(const Clause &a, const Clause &b) {
    int clash = 0;
    auto i = a.lits().begin(), j = b.lits().begin();
    while (i != a.lits().end() && j != b.lits().end()) {
        if (i->var() < j->var()) ++i;
        else if (j->var() < i->var()) ++j;
        else {
            if (i->sign() != j->sign()) {
                if (clash) return std::nullopt;
                clash = i->var();
            }
            ++i, ++j;
        }
    }
    if (!clash) return std::nullopt;
    return clash;
}

std::optional<Clause> resolve(const Clause &a, const Clause &b, int pivot) {
    auto c = unique_clash(a, b);
    if (!c || *c != pivot) return std::nullopt;
    return a.without_var(pivot).join(b.without_var(pivot));
}

Clause circ(const Clause &a, const Clause &b, int pivot) {
    int sa = a.sign_of(pivot), sb = b.sign_of(pivot);
    if (sa < 0 || sb < 0 || sa == sb) return a;
    auto r = resolve(a, b, pivot);
    if (!r) throw std::logic_error("circ: clauses clash outside the pivot");
    return *r;
}

Cnf::Cnf(int num_vars, std::vector<Clause> clauses) : n_(num_vars), cls_(std::move(clauses)) {
    std::sort(cls_.begin(), cls_.end());
    cls_.erase(std::unique(cls_.begin(), cls_.end()), cls_.end());
    for (const Clause &c : cls_)
        if (c.max_var() > n_)
            throw std::invalid_argument("clause variable exceeds num_vars");
}

bool Cnf::contains(const Clause &c) const { return std::binary_search(cls_.begin(), cls_.end(), c); }

std::vector<int> Cnf::used_vars() const {
    std::vector<char> seen(n_ + 1, 0);
    for (const Clause &c : cls_)
        for (Lit l : c.lits()) seen[l.var()] = 1;
    std::vector<int> v;
    for (int i = 1; i <= n_; ++i)
        if (seen[i]) v.push_back(i);
    return v;
}

void Restriction::set(int var, int value) {
    if (var >= static_cast<int>(val_.size())) val_.resize(var + 1, -1);
    if (val_[var] >= 0 && val_[var] != value)
        throw std::invalid_argument("variable assigned twice");
    val_[var] = static_cast<int8_t>(value);
}

std::vector<int> Restriction::domain() const {
    std::vector<int> v;
    for (int i = 1; i < static_cast<int>(val_.size()); ++i)
        if (val_[i] >= 0) v.push_back(i);
    return v;
}

std::optional<Clause> restrict_clause(const Clause &c, const Restriction &rho) {
    std::vector<Lit> keep;
    for (Lit l : c.lits()) {
        if (rho.satisfies(l)) return std::nullopt;
        if (!rho.falsifies(l)) keep.push_back(l);
    }
    return Clause(std::move(keep));
}

bool falsified(const Clause &c, const Restriction &rho) {
    for (Lit l : c.lits())
        if (!rho.falsifies(l)) return false;
    return true;
}

bool satisfied(const Clause &c, const Restriction &rho) {
    for (Lit l : c.lits())
        if (rho.satisfies(l)) return true;
    return false;
}

Cnf restrict_cnf(const Cnf &tau, const Restriction &rho) {
    std::vector<Clause> out;
    for (const Clause &c : tau.clauses())
        if (auto r = restrict_clause(c, rho)) out.push_back(std::move(*r));
    return Cnf(tau.num_vars(), std::move(out));
}

VarOrder VarOrder::identity(int n) {
    std::vector<int> seq(n);
    for (int i = 0; i < n; ++i) seq[i] = i + 1;
    return from_sequence(n, std::move(seq));
}

VarOrder VarOrder::from_sequence(int n, std::vector<int> seq) {
    VarOrder o;
    o.n_ = n;
    o.pos_.assign(n + 1, 0);
    for (std::size_t k = 0; k < seq.size(); ++k) {
        int v = seq[k];
        if (v < 1 || v > n) throw std::invalid_argument("order variable out of range");
        if (o.pos_[v]) throw std::invalid_argument("order lists a variable twice");
        o.pos_[v] = static_cast<int>(k) + 1;
    }
    o.seq_ = std::move(seq);
    return o;
}

VarOrder VarOrder::from_ranks(const std::vector<int> &perm) {
    int n = static_cast<int>(perm.size());
    std::vector<int> seq(n, 0);
    for (int i = 0; i < n; ++i) {
        int r = perm[i];
        if (r < 1 || r > n || seq[r - 1]) throw std::invalid_argument("order is not a bijection");
        seq[r - 1] = i + 1;
    }
    return from_sequence(n, std::move(seq));
}

int VarOrder::first_unassigned(const Restriction &rho) const {
    for (int v : seq_)
        if (!rho.assigned(v)) return v;
    return 0;
}

VarOrder VarOrder::without(int var) const {
    std::vector<int> seq;
    for (int v : seq_)
        if (v != var) seq.push_back(v);
    return from_sequence(n_, std::move(seq));
}

std::vector<int> VarOrder::ranks() const {
    if (size() != n_) throw std::logic_error("ranks() of a partial order");
    return std::vector<int>(pos_.begin() + 1, pos_.end());
}

bool is_k_small(const Clause &c, const VarOrder &order, int k) {
    for (Lit l : c.lits()) {
        int r = order.rank(l.var());
        if (r == 0 || r > k) return false;
    }
    return true;
}

bool is_almost_k_small(const Clause &c, const VarOrder &order, int k) {
    int outside = 0;
    for (Lit l : c.lits()) {
        int r = order.rank(l.var());
        if (r == 0 || r > k) ++outside;
    }
    return outside <= 1;
}

int max_rank(const Clause &c, const VarOrder &order) {
    int m = 0;
    for (Lit l : c.lits()) m = std::max(m, order.rank(l.var()));
    return m;
}

std::vector<int> PointedGraph::preds(int v) const {
    std::vector<int> p;
    for (auto [a, b] : edges)
        if (b == v) p.push_back(a);
    std::sort(p.begin(), p.end());
    return p;
}

std::vector<int> PointedGraph::succs(int v) const {
    std::vector<int> s;
    for (auto [a, b] : edges)
        if (a == v) s.push_back(b);
    std::sort(s.begin(), s.end());
    return s;
}

bool PointedGraph::topologically_numbered() const {
    for (auto [a, b] : edges)
        if (a >= b) return false;
    return sink == n;
}

void PointedGraph::validate() const {
    if (n < 1) throw std::invalid_argument("graph has no vertices");
    std::set<std::pair<int, int>> seen;
    for (auto [a, b] : edges) {
        if (a < 1 || a > n || b < 1 || b > n || a == b)
            throw std::invalid_argument("bad edge");
        if (!seen.insert({a, b}).second) throw std::invalid_argument("duplicate edge");
    }
    int sinks = 0;
    for (int v = 1; v <= n; ++v) {
        auto p = preds(v);
        if (!p.empty() && p.size() != 2)
            throw std::invalid_argument("vertex " + std::to_string(v) + " has fan-in " +
                                        std::to_string(p.size()));
        if (succs(v).empty()) {
            ++sinks;
            if (v != sink) throw std::invalid_argument("vertex without successor is not the sink");
        }
    }
    if (sinks != 1) throw std::invalid_argument("pointed graph needs exactly one sink");
    // Kahn's algorithm for acyclicity
    std::vector<int> indeg(n + 1, 0);
    for (auto e : edges) ++indeg[e.second];
    std::vector<int> stack;
    for (int v = 1; v <= n; ++v)
        if (!indeg[v]) stack.push_back(v);
    int done = 0;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        ++done;
        for (int s : succs(v))
            if (--indeg[s] == 0) stack.push_back(s);
    }
    if (done != n) throw std::invalid_argument("graph has a cycle");
}

Cnf gen_induction(int n) {
    if (n < 1) throw std::invalid_argument("gen_induction needs n >= 1");
    std::vector<Clause> cls;
    cls.push_back(Clause::from_dimacs({1}));
    for (int i = 1; i < n; ++i) cls.push_back(Clause::from_dimacs({-i, i + 1}));
    cls.push_back(Clause::from_dimacs({-n}));
    return Cnf(n, std::move(cls));
}

std::pair<Cnf, XorMap> xor_substitute(const Cnf &tau, int r) {
    if (r < 1) throw std::invalid_argument("xor arity must be positive");
    XorMap map{tau.num_vars(), r};
    std::vector<Clause> out;
    for (const Clause &c : tau.clauses()) {
        // A literal x_i^a is false iff the parity of row i is 1-a.  Emit one
        // clause per assignment of the rows making every literal false.
        const auto &lits = c.lits();
        std::size_t w = lits.size();
        std::size_t free_bits = w * (r - 1);
        for (uint64_t mask = 0; mask < (uint64_t{1} << free_bits); ++mask) {
            std::vector<Lit> out_lits;
            for (std::size_t p = 0; p < w; ++p) {
                int row = lits[p].var();
                int want = 1 - lits[p].sign();
                int parity = 0;
                for (int j = 1; j <= r; ++j) {
                    int bit;
                    if (j < r) {
                        bit = (mask >> (p * (r - 1) + (j - 1))) & 1;
                        parity ^= bit;
                    } else {
                        bit = parity ^ want;
                    }
                    // the clause forbids this assignment, so it holds the opposite literal
                    out_lits.push_back(Lit::make(map.var(row, j), 1 - bit));
                }
            }
            out.emplace_back(std::move(out_lits));
        }
    }
    Cnf res(tau.num_vars() * r, std::move(out));
    return {res, map};
}

Cnf gen_random_kcnf(int n, int m, int k, uint64_t seed) {
    if (k > n) throw std::invalid_argument("clause width exceeds variable count");
    std::mt19937_64 rng(seed);
    std::vector<Clause> cls;
    std::vector<int> vars(n);
    for (int i = 0; i < n; ++i) vars[i] = i + 1;
    for (int c = 0; c < m; ++c) {
        std::shuffle(vars.begin(), vars.end(), rng);
        std::vector<Lit> lits;
        for (int j = 0; j < k; ++j) lits.push_back(Lit::make(vars[j], rng() & 1));
        cls.emplace_back(std::move(lits));
    }
    return Cnf(n, std::move(cls));
}

Cnf gen_stone(const PointedGraph &g0, int m) {
    g0.validate();
    if (m < g0.n) throw std::invalid_argument("stone formulas need m >= n");
    PointedGraph g = g0.topologically_numbered() ? g0 : renumber_topologically(g0);
    StoneMap s{g.n, m};
    std::vector<Clause> cls;
    auto neg = [](int v) { return Lit::make(v, 0); };
    auto pos = [](int v) { return Lit::make(v, 1); };
    for (int i = 1; i <= g.n; ++i) {
        std::vector<Lit> c;
        for (int u = 1; u <= m; ++u) c.push_back(pos(s.P(i, u)));
        cls.emplace_back(std::move(c));
    }
    for (int k = 1; k <= g.n; ++k)
        if (g.is_source(k))
            for (int u = 1; u <= m; ++u) cls.push_back(Clause({neg(s.P(k, u)), pos(s.R(u))}));
    for (int u = 1; u <= m; ++u) cls.push_back(Clause({neg(s.P(g.sink, u)), neg(s.R(u))}));
    for (int k = 1; k <= g.n; ++k) {
        auto p = g.preds(k);
        if (p.empty()) continue;
        int i = p[0], j = p[1];
        for (int t = 1; t <= m; ++t)
            for (int u = 1; u <= m; ++u)
                for (int v = 1; v <= m; ++v) {
                    // t = v or u = v puts R_v and ~R_v in one clause: a tautology, not a clause
                    if (t == v || u == v) continue;
                    cls.push_back(Clause({neg(s.P(i, t)), neg(s.R(t)), neg(s.P(j, u)),
                                          neg(s.R(u)), neg(s.P(k, v)), pos(s.R(v))}));
                }
    }
    return Cnf(g.n * m + m, std::move(cls));
}

PointedGraph gen_pointed_graph(int n, uint64_t seed) {
    if (n < 3) throw std::invalid_argument("pointed graphs here need n >= 3");
    std::mt19937_64 rng(seed);
    // s sources need s-1 inner vertices to join them, so s <= (n+1)/2
    int max_sources = (n + 1) / 2;
    int sources = 2 + static_cast<int>(rng() % (max_sources - 1));
    PointedGraph g;
    g.n = n;
    g.sink = n;
    std::vector<char> has_succ(n + 1, 0);
    for (int v = sources + 1; v <= n; ++v) {
        std::vector<int> dangling, other;
        for (int w = 1; w < v; ++w) (has_succ[w] ? other : dangling).push_back(w);
        std::shuffle(dangling.begin(), dangling.end(), rng);
        std::shuffle(other.begin(), other.end(), rng);
        // a later inner vertex absorbs at most one dangling vertex net, the sink two
        int must = std::max(0, static_cast<int>(dangling.size()) - (n - v));
        if (v == n) must = static_cast<int>(dangling.size());
        if (must > 2) throw std::logic_error("pointed graph generator invariant broken");
        int take = std::max(must, static_cast<int>(rng() % 3));
        take = std::min<int>(take, std::min<int>(2, dangling.size()));
        std::vector<int> pick(dangling.begin(), dangling.begin() + take);
        for (int w : other) {
            if (static_cast<int>(pick.size()) == 2) break;
            pick.push_back(w);
        }
        for (std::size_t q = take; pick.size() < 2 && q < dangling.size(); ++q) pick.push_back(dangling[q]);
        for (int w : pick) {
            g.edges.push_back({w, v});
            has_succ[w] = 1;
        }
    }
    std::sort(g.edges.begin(), g.edges.end());
    g.validate();
    return g;
}

PointedGraph renumber_topologically(const PointedGraph &g) {
    g.validate();
    std::vector<int> indeg(g.n + 1, 0), label(g.n + 1, 0);
    for (auto e : g.edges) ++indeg[e.second];
    std::set<int> ready;
    for (int v = 1; v <= g.n; ++v)
        if (!indeg[v]) ready.insert(v);
    int next = 1;
    while (!ready.empty()) {
        int v = *ready.begin();
        ready.erase(ready.begin());
        label[v] = next++;
        for (int s : g.succs(v))
            if (--indeg[s] == 0) ready.insert(s);
    }
    PointedGraph h;
    h.n = g.n;
    h.sink = label[g.sink];
    for (auto [a, b] : g.edges) h.edges.push_back({label[a], label[b]});
    std::sort(h.edges.begin(), h.edges.end());
    return h;
}

VarOrder order_row_then_column(int n, int r) {
    XorMap map{n, r};
    std::vector<int> seq;
    for (int j = 1; j <= r; ++j)
        for (int i = 1; i <= n; ++i) seq.push_back(map.var(i, j));
    return VarOrder::from_sequence(n * r, std::move(seq));
}

VarOrder order_stone(const PointedGraph &g0, int m) {
    PointedGraph g = g0.topologically_numbered() ? g0 : renumber_topologically(g0);
    StoneMap s{g.n, m};
    std::vector<int> seq;
    for (int i = g.n; i >= 1; --i)
        for (int u = 1; u <= m; ++u) seq.push_back(s.P(i, u));
    for (int v = 1; v <= m; ++v) seq.push_back(s.R(v));
    return VarOrder::from_sequence(g.n * m + m, std::move(seq));
}

bool is_row_parallel(const VarOrder &o, const XorMap &map) {
    // u = v is excluded: with it the biconditional fails for any two rows.
    for (int i = 1; i <= map.rows; ++i)
        for (int j = 1; j <= map.rows; ++j)
            for (int u = 1; u <= map.cols; ++u)
                for (int v = 1; v <= map.cols; ++v) {
                    if (u == v) continue;
                    bool lhs = u < v;
                    bool rhs = o.rank(map.var(i, u)) < o.rank(map.var(j, v));
                    if (lhs != rhs) return false;
                }
    return true;
}

bool is_column_parallel(const VarOrder &o, const XorMap &map) {
    for (int i = 1; i <= map.rows; ++i)
        for (int j = 1; j <= map.rows; ++j)
            for (int u = 1; u <= map.cols; ++u)
                for (int v = 1; v <= map.cols; ++v) {
                    bool a = o.rank(map.var(i, u)) < o.rank(map.var(j, u));
                    bool b = o.rank(map.var(i, v)) < o.rank(map.var(j, v));
                    if (a != b) return false;
                }
    return true;
}

std::string content_hash(const Cnf &tau) {
    uint64_t h = 1469598103934665603ull;
    auto mix = [&](uint64_t x) {
        h ^= x;
        h *= 1099511628211ull;
    };
    mix(static_cast<uint64_t>(tau.num_vars()));
    for (const Clause &c : tau.clauses()) {
        for (Lit l : c.lits()) mix(static_cast<uint64_t>(l.code));
        mix(0xffffffffull);
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---- text formats ----

namespace {

std::string next_data_line(std::istream &in, std::vector<std::string> *comments) {
    std::string line;
    while (std::getline(in, line)) {
        auto p = line.find_first_not_of(" \t\r");
        if (p == std::string::npos) continue;
        if (line[p] == 'c') {
            if (comments) {
                std::string body = line.substr(p + 1);
                if (!body.empty() && body[0] == ' ') body.erase(0, 1);
                comments->push_back(body);
            }
            continue;
        }
        return line;
    }
    return {};
}

}  // namespace

Cnf read_dimacs(std::istream &in) {
    std::vector<std::string> comments;
    std::string header = next_data_line(in, &comments);
    std::istringstream hs(header);
    std::string p, kind;
    long n = -1, m = -1;
    if (!(hs >> p >> kind >> n >> m) || p != "p" || kind != "cnf" || n < 0 || m < 0)
        throw ParseError("expected 'p cnf <n> <m>' header");
    std::vector<Clause> cls;
    std::vector<int> cur;
    long tok;
    std::string line;
    while (true) {
        line = next_data_line(in, &comments);
        if (line.empty()) break;
        std::istringstream ls(line);
        std::string word;
        while (ls >> word) {
            if (word == "%") goto done;
            try {
                std::size_t used = 0;
                tok = std::stol(word, &used);
                if (used != word.size()) throw ParseError("bad token '" + word + "'");
            } catch (const std::logic_error &) {
                throw ParseError("bad token '" + word + "'");
            }
            if (tok == 0) {
                try {
                    cls.push_back(Clause::from_dimacs(cur));
                } catch (const std::invalid_argument &e) {
                    throw ParseError(std::string("tautological clause: ") + e.what());
                }
                cur.clear();
            } else {
                if (std::labs(tok) > n) throw ParseError("literal exceeds declared variable count");
                cur.push_back(static_cast<int>(tok));
            }
        }
    }
done:
    if (!cur.empty()) throw ParseError("last clause not terminated by 0");
    Cnf tau(static_cast<int>(n), std::move(cls));
    tau.comments = std::move(comments);
    return tau;
}

void write_dimacs(std::ostream &out, const Cnf &tau) {
    for (const auto &c : tau.comments) out << "c " << c << '\n';
    out << "p cnf " << tau.num_vars() << ' ' << tau.size() << '\n';
    for (const Clause &c : tau.clauses()) {
        for (int d : c.to_dimacs()) out << d << ' ';
        out << "0\n";
    }
}

Cnf read_dimacs_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return read_dimacs(in);
}

void write_dimacs_file(const std::string &path, const Cnf &tau) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_dimacs(out, tau);
}

VarOrder read_order(std::istream &in, int n_hint) {
    std::string line = next_data_line(in, nullptr);
    std::istringstream hs(line);
    std::string first;
    hs >> first;
    if (first == "identity") {
        int n = n_hint;
        if (!(hs >> n) && n_hint <= 0) throw ParseError("'identity' order needs a variable count");
        return VarOrder::identity(n);
    }
    std::string kind;
    int n;
    if (first != "p" || !(hs >> kind >> n) || kind != "order") throw ParseError("expected 'p order <n>'");
    std::vector<int> perm;
    std::string word;
    int v;
    while (static_cast<int>(perm.size()) < n) {
        if (in >> v) perm.push_back(v);
        else {
            if (in.eof() && perm.empty()) {
                return VarOrder::identity(n);
            }
            in.clear();
            if (!(in >> word)) break;
            if (word == "identity" && perm.empty()) return VarOrder::identity(n);
            throw ParseError("bad order token '" + word + "'");
        }
    }
    if (static_cast<int>(perm.size()) != n) throw ParseError("order lists too few ranks");
    try {
        return VarOrder::from_ranks(perm);
    } catch (const std::invalid_argument &e) {
        throw ParseError(e.what());
    }
}

void write_order(std::ostream &out, const VarOrder &order) {
    out << "p order " << order.num_vars() << '\n';
    auto r = order.ranks();
    for (std::size_t i = 0; i < r.size(); ++i) out << r[i] << (i + 1 == r.size() ? '\n' : ' ');
    if (r.empty()) out << '\n';
}

VarOrder read_order_file(const std::string &path, int n_hint) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return read_order(in, n_hint);
}

PointedGraph read_graph(std::istream &in) {
    std::string line = next_data_line(in, nullptr);
    std::istringstream hs(line);
    std::string p, kind;
    PointedGraph g;
    if (!(hs >> p >> kind >> g.n) || p != "p" || kind != "graph") throw ParseError("expected 'p graph <n>'");
    while (true) {
        line = next_data_line(in, nullptr);
        if (line.empty()) break;
        std::istringstream ls(line);
        std::string e;
        int a, b;
        if (!(ls >> e >> a >> b) || e != "e") throw ParseError("expected 'e <u> <v>'");
        g.edges.push_back({a, b});
    }
    std::sort(g.edges.begin(), g.edges.end());
    std::vector<char> has_succ(g.n + 1, 0);
    for (auto [a, b] : g.edges)
        if (a >= 1 && a <= g.n) has_succ[a] = 1;
    for (int v = 1; v <= g.n; ++v)
        if (!has_succ[v]) g.sink = v;
    try {
        g.validate();
    } catch (const std::invalid_argument &e) {
        throw ParseError(e.what());
    }
    return g;
}

void write_graph(std::ostream &out, const PointedGraph &g) {
    out << "p graph " << g.n << '\n';
    for (auto [a, b] : g.edges) out << "e " << a << ' ' << b << '\n';
}

}  // namespace pl
