#include "prooflab/resproof.hpp"

#include <algorithm>
#include <istream>
#include "json.hpp"
#include <ostream>
#include <sstream>

namespace pl {

int ResolutionProof::add_axiom(const Clause &c) {
    nodes.push_back(ProofNode{c, Rule::Axiom, -1, -1, 0});
    return static_cast<int>(nodes.size()) - 1;
}

int ResolutionProof::add_resolution(int a, int b, int pivot) {
    auto r = resolve(nodes.at(a).clause, nodes.at(b).clause, pivot);
    if (!r)
        throw std::invalid_argument("nodes " + std::to_string(a) + "," + std::to_string(b) +
                                    " do not resolve on " + std::to_string(pivot));
    nodes.push_back(ProofNode{*r, Rule::Resolution, a, b, pivot});
    return static_cast<int>(nodes.size()) - 1;
}

int ResolutionProof::add_weakening(int parent, const Clause &c) {
    if (!nodes.at(parent).clause.subset_of(c)) throw std::invalid_argument("weakening must extend its premise");
    nodes.push_back(ProofNode{c, Rule::Weakening, parent, -1, 0});
    return static_cast<int>(nodes.size()) - 1;
}

int ResolutionProof::first_empty() const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].clause.empty()) return static_cast<int>(i);
    return -1;
}

std::vector<std::vector<int>> ResolutionProof::children() const {
    std::vector<std::vector<int>> ch(nodes.size());
    for (std::size_t v = 0; v < nodes.size(); ++v) {
        if (nodes[v].p1 >= 0) ch[nodes[v].p1].push_back(static_cast<int>(v));
        if (nodes[v].p2 >= 0 && nodes[v].p2 != nodes[v].p1) ch[nodes[v].p2].push_back(static_cast<int>(v));
    }
    return ch;
}

CheckReport CheckReport::fail(std::string code, long where, std::string detail) {
    CheckReport r;
    r.ok = false;
    r.code = std::move(code);
    r.where = where;
    r.detail = std::move(detail);
    return r;
}

std::string CheckReport::json() const {
    nlohmann::json j;
    j["ok"] = ok;
    if (!ok) {
        j["code"] = code;
        j["where"] = where;
        j["detail"] = detail;
    }
    j["size"] = size;
    j["width"] = width;
    return j.dump();
}

long proof_size(const ResolutionProof &pi) { return static_cast<long>(pi.nodes.size()); }

long proof_width(const ResolutionProof &pi) {
    long w = 0;
    for (const auto &n : pi.nodes) w = std::max<long>(w, n.clause.width());
    return w;
}

CheckReport check_resolution(const ResolutionProof &pi, const Cnf &tau) {
    for (std::size_t i = 0; i < pi.nodes.size(); ++i) {
        const ProofNode &n = pi.nodes[i];
        long id = static_cast<long>(i) + 1;
        auto parent_ok = [&](int p) { return p >= 0 && p < static_cast<int>(i); };
        switch (n.rule) {
        case Rule::Axiom:
            if (!tau.contains(n.clause))
                return CheckReport::fail("axiom-not-in-cnf", id, n.clause.str());
            break;
        case Rule::Resolution: {
            if (!parent_ok(n.p1) || !parent_ok(n.p2))
                return CheckReport::fail("bad-parent", id, "parents must precede the node");
            const Clause &a = pi.nodes[n.p1].clause, &b = pi.nodes[n.p2].clause;
            auto clash = unique_clash(a, b);
            if (!clash) return CheckReport::fail("not-resolvable", id, "premises clash on zero or several variables");
            if (*clash != n.pivot)
                return CheckReport::fail("pivot-mismatch", id,
                                         "recorded " + std::to_string(n.pivot) + ", clash on " + std::to_string(*clash));
            if (*resolve(a, b, n.pivot) != n.clause)
                return CheckReport::fail("wrong-resolvent", id, n.clause.str());
            break;
        }
        case Rule::Weakening:
            if (!pi.allow_weakening) return CheckReport::fail("weakening-disallowed", id, "");
            if (!parent_ok(n.p1)) return CheckReport::fail("bad-parent", id, "parent must precede the node");
            if (!pi.nodes[n.p1].clause.subset_of(n.clause))
                return CheckReport::fail("bad-weakening", id, "premise is not a subclause");
            break;
        }
    }
    CheckReport r;
    r.size = proof_size(pi);
    r.width = proof_width(pi);
    return r;
}

bool side_below(const Clause &c, int pivot, const VarOrder &order) {
    int rp = order.rank(pivot);
    if (rp == 0) return false;
    for (Lit l : c.lits()) {
        if (l.var() == pivot) continue;
        int r = order.rank(l.var());
        if (r == 0 || r >= rp) return false;
    }
    return true;
}

bool step_half_ordered(const Clause &a, const Clause &b, int pivot, const VarOrder &order) {
    return side_below(a, pivot, order) || side_below(b, pivot, order);
}

bool step_ordered(const Clause &a, const Clause &b, int pivot, const VarOrder &order) {
    return side_below(a, pivot, order) && side_below(b, pivot, order);
}

namespace {

CheckReport check_steps(const ResolutionProof &pi, const VarOrder &order, bool both) {
    for (std::size_t i = 0; i < pi.nodes.size(); ++i) {
        const ProofNode &n = pi.nodes[i];
        if (n.rule != Rule::Resolution) continue;
        const Clause &a = pi.nodes[n.p1].clause, &b = pi.nodes[n.p2].clause;
        bool ok = both ? step_ordered(a, b, n.pivot, order) : step_half_ordered(a, b, n.pivot, order);
        if (!ok)
            return CheckReport::fail(both ? "not-ordered" : "not-half-ordered", static_cast<long>(i) + 1,
                                     "pivot " + std::to_string(n.pivot));
    }
    CheckReport r;
    r.size = proof_size(pi);
    r.width = proof_width(pi);
    return r;
}

}  // namespace

CheckReport check_ordered(const ResolutionProof &pi, const VarOrder &order) { return check_steps(pi, order, true); }

CheckReport check_half_ordered(const ResolutionProof &pi, const VarOrder &order) {
    return check_steps(pi, order, false);
}

NodeSet singleton(const ResolutionProof &pi, int v) {
    NodeSet s(pi.nodes.size(), 0);
    s.at(v) = 1;
    return s;
}

NodeSet ucl(const ResolutionProof &pi, const NodeSet &s) {
    NodeSet u = s;
    for (std::size_t v = 0; v < pi.nodes.size(); ++v) {
        const auto &n = pi.nodes[v];
        if ((n.p1 >= 0 && u[n.p1]) || (n.p2 >= 0 && u[n.p2])) u[v] = 1;
    }
    return u;
}

NodeSet dcl(const ResolutionProof &pi, const NodeSet &s) {
    NodeSet d = s;
    for (std::size_t v = pi.nodes.size(); v-- > 0;) {
        if (!d[v]) continue;
        const auto &n = pi.nodes[v];
        if (n.p1 >= 0) d[n.p1] = 1;
        if (n.p2 >= 0) d[n.p2] = 1;
    }
    return d;
}

bool is_parent_complete(const ResolutionProof &pi, const NodeSet &s) {
    for (std::size_t v = 0; v < pi.nodes.size(); ++v) {
        const auto &n = pi.nodes[v];
        if (!s[v] || n.rule != Rule::Resolution) continue;
        if (s[n.p1] != s[n.p2]) return false;
    }
    return true;
}

namespace {

// below[v]: some proper ancestor of v lies in s
NodeSet has_ancestor_in(const ResolutionProof &pi, const NodeSet &s) {
    NodeSet below(pi.nodes.size(), 0);
    for (std::size_t v = 0; v < pi.nodes.size(); ++v) {
        const auto &n = pi.nodes[v];
        for (int p : {n.p1, n.p2})
            if (p >= 0 && (s[p] || below[p])) below[v] = 1;
    }
    return below;
}

NodeSet has_descendant_in(const ResolutionProof &pi, const NodeSet &s) {
    NodeSet above(pi.nodes.size(), 0);
    for (std::size_t v = pi.nodes.size(); v-- > 0;) {
        if (!(s[v] || above[v])) continue;
        const auto &n = pi.nodes[v];
        for (int p : {n.p1, n.p2})
            if (p >= 0) above[p] = 1;
    }
    return above;
}

}  // namespace

bool is_path_complete(const ResolutionProof &pi, const NodeSet &s) {
    NodeSet a = has_ancestor_in(pi, s), d = has_descendant_in(pi, s);
    for (std::size_t v = 0; v < pi.nodes.size(); ++v)
        if (!s[v] && a[v] && d[v]) return false;
    return true;
}

std::vector<int> min_nodes(const ResolutionProof &pi, const NodeSet &s) {
    NodeSet a = has_ancestor_in(pi, s);
    std::vector<int> out;
    for (std::size_t v = 0; v < pi.nodes.size(); ++v)
        if (s[v] && !a[v]) out.push_back(static_cast<int>(v));
    return out;
}

std::vector<int> max_nodes(const ResolutionProof &pi, const NodeSet &s) {
    NodeSet d = has_descendant_in(pi, s);
    std::vector<int> out;
    for (std::size_t v = 0; v < pi.nodes.size(); ++v)
        if (s[v] && !d[v]) out.push_back(static_cast<int>(v));
    return out;
}

MappedProof subproof_on(const ResolutionProof &pi, const NodeSet &s) {
    if (!is_parent_complete(pi, s) || !is_path_complete(pi, s))
        throw std::invalid_argument("subproof_on needs a parent- and path-complete set");
    MappedProof out;
    out.proof.num_vars = pi.num_vars;
    out.proof.allow_weakening = pi.allow_weakening;
    out.map.assign(pi.nodes.size(), -1);
    for (std::size_t v = 0; v < pi.nodes.size(); ++v) {
        if (!s[v]) continue;
        ProofNode n = pi.nodes[v];
        bool inside = n.p1 >= 0 && s[n.p1];
        if (!inside) {
            n.rule = Rule::Axiom;
            n.p1 = n.p2 = -1;
            n.pivot = 0;
        } else {
            n.p1 = out.map[n.p1];
            if (n.p2 >= 0) n.p2 = out.map[n.p2];
        }
        out.proof.nodes.push_back(n);
        out.map[v] = static_cast<int>(out.proof.nodes.size()) - 1;
    }
    return out;
}

MappedProof connected_core(const ResolutionProof &pi) {
    int z = pi.first_empty();
    if (z < 0) throw std::invalid_argument("connected_core: proof derives no empty clause");
    return subproof_on(pi, dcl(pi, singleton(pi, z)));
}

MappedProof restrict_proof(const ResolutionProof &pi, const Restriction &rho) {
    MappedProof out;
    out.proof.num_vars = pi.num_vars;
    out.map.assign(pi.nodes.size(), -1);
    auto &q = out.proof;
    for (std::size_t v = 0; v < pi.nodes.size(); ++v) {
        const ProofNode &n = pi.nodes[v];
        int &m = out.map[v];
        switch (n.rule) {
        case Rule::Axiom:
            if (auto r = restrict_clause(n.clause, rho)) m = q.add_axiom(*r);
            break;
        case Rule::Weakening:
            m = out.map[n.p1];
            break;
        case Rule::Resolution: {
            int x = n.pivot;
            int a = out.map[n.p1], b = out.map[n.p2];
            int val = rho.get(x);
            if (val >= 0) {
                // keep the premise whose pivot literal rho falsifies
                int sa = pi.nodes[n.p1].clause.sign_of(x);
                m = (sa != val) ? a : b;
                break;
            }
            if (a < 0 || b < 0) break;
            if (!q.clause(a).has_var(x)) m = a;
            else if (!q.clause(b).has_var(x)) m = b;
            else m = q.add_resolution(a, b, x);
            break;
        }
        }
    }
    return out;
}

MappedProof contract_weakenings(const ResolutionProof &pi) {
    MappedProof out;
    out.proof.num_vars = pi.num_vars;
    out.map.assign(pi.nodes.size(), -1);
    auto &q = out.proof;
    for (std::size_t v = 0; v < pi.nodes.size(); ++v) {
        const ProofNode &n = pi.nodes[v];
        switch (n.rule) {
        case Rule::Axiom:
            out.map[v] = q.add_axiom(n.clause);
            break;
        case Rule::Weakening:
            out.map[v] = out.map[n.p1];
            break;
        case Rule::Resolution: {
            int a = out.map[n.p1], b = out.map[n.p2];
            if (!q.clause(a).has_var(n.pivot)) out.map[v] = a;
            else if (!q.clause(b).has_var(n.pivot)) out.map[v] = b;
            else out.map[v] = q.add_resolution(a, b, n.pivot);
            break;
        }
        }
    }
    return out;
}

bool is_connected_refutation(const ResolutionProof &pi) {
    if (pi.nodes.empty() || !pi.nodes.back().clause.empty()) return false;
    NodeSet d = dcl(pi, singleton(pi, static_cast<int>(pi.nodes.size()) - 1));
    return std::all_of(d.begin(), d.end(), [](char c) { return c != 0; });
}

std::vector<int> proof_vars(const ResolutionProof &pi) {
    std::vector<char> seen(pi.num_vars + 1, 0);
    for (const auto &n : pi.nodes)
        for (Lit l : n.clause.lits()) {
            if (l.var() >= static_cast<int>(seen.size())) seen.resize(l.var() + 1, 0);
            seen[l.var()] = 1;
        }
    std::vector<int> v;
    for (std::size_t i = 1; i < seen.size(); ++i)
        if (seen[i]) v.push_back(static_cast<int>(i));
    return v;
}

Cnf proof_axioms(const ResolutionProof &pi) {
    std::vector<Clause> cls;
    for (const auto &n : pi.nodes)
        if (n.rule == Rule::Axiom) cls.push_back(n.clause);
    return Cnf(pi.num_vars, std::move(cls));
}

// ---- text format ----

namespace {

std::vector<int> read_lits(std::istringstream &ls) {
    std::vector<int> v;
    int d;
    while (ls >> d) {
        if (d == 0) return v;
        v.push_back(d);
    }
    throw ParseError("literal list not terminated by 0");
}

}  // namespace

ResolutionProof read_proof(std::istream &in) {
    ResolutionProof pi;
    std::string line;
    bool header = false;
    long expect = 1;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag[0] == 'c') continue;
        if (tag == "p") {
            std::string kind;
            if (!(ls >> kind >> pi.num_vars) || kind != "res") throw ParseError("expected 'p res <n>'");
            header = true;
            continue;
        }
        if (!header) throw ParseError("missing 'p res' header");
        long id;
        if (!(ls >> id) || id != expect) throw ParseError("node ids must be 1,2,3,...");
        ++expect;
        try {
            if (tag == "a") {
                pi.nodes.push_back({Clause::from_dimacs(read_lits(ls)), Rule::Axiom, -1, -1, 0});
            } else if (tag == "r") {
                int p1, p2, x;
                if (!(ls >> p1 >> p2 >> x)) throw ParseError("bad resolution line");
                pi.nodes.push_back({Clause::from_dimacs(read_lits(ls)), Rule::Resolution, p1 - 1, p2 - 1, x});
            } else if (tag == "w") {
                int p;
                if (!(ls >> p)) throw ParseError("bad weakening line");
                pi.nodes.push_back({Clause::from_dimacs(read_lits(ls)), Rule::Weakening, p - 1, -1, 0});
                pi.allow_weakening = true;
            } else {
                throw ParseError("unknown line tag '" + tag + "'");
            }
        } catch (const std::invalid_argument &e) {
            throw ParseError(e.what());
        }
    }
    if (!header) throw ParseError("missing 'p res' header");
    return pi;
}

void write_proof(std::ostream &out, const ResolutionProof &pi) {
    out << "p res " << pi.num_vars << '\n';
    for (std::size_t i = 0; i < pi.nodes.size(); ++i) {
        const auto &n = pi.nodes[i];
        switch (n.rule) {
        case Rule::Axiom: out << "a " << i + 1; break;
        case Rule::Resolution: out << "r " << i + 1 << ' ' << n.p1 + 1 << ' ' << n.p2 + 1 << ' ' << n.pivot; break;
        case Rule::Weakening: out << "w " << i + 1 << ' ' << n.p1 + 1; break;
        }
        for (int d : n.clause.to_dimacs()) out << ' ' << d;
        out << " 0\n";
    }
}

void write_dot(std::ostream &out, const ResolutionProof &pi) {
    out << "digraph proof {\n  node [shape=box];\n";
    for (std::size_t i = 0; i < pi.nodes.size(); ++i) {
        const auto &n = pi.nodes[i];
        out << "  n" << i + 1 << " [label=\"" << i + 1 << ": " << (n.clause.empty() ? "⊥" : n.clause.str()) << "\"";
        if (n.rule == Rule::Axiom) out << " style=filled fillcolor=lightgrey";
        out << "];\n";
        if (n.p1 >= 0) out << "  n" << n.p1 + 1 << " -> n" << i + 1 << ";\n";
        if (n.p2 >= 0) out << "  n" << n.p2 + 1 << " -> n" << i + 1 << ";\n";
    }
    out << "}\n";
}

}  // namespace pl
