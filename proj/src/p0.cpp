#include "prooflab/p0.hpp"

#include <istream>
#include <ostream>
#include <sstream>

namespace pl {

int P0Proof::first_empty() const {
    for (std::size_t i = 0; i < lines.size(); ++i)
        if (!lines[i].is_trail() && lines[i].clause.empty()) return static_cast<int>(i);
    return -1;
}

std::optional<int> P0Proof::find_clause(const Clause &c) const {
    for (std::size_t i = 0; i < lines.size(); ++i)
        if (!lines[i].is_trail() && lines[i].clause == c) return static_cast<int>(i);
    return std::nullopt;
}

namespace {

struct LineError {
    std::string code, detail;
};

bool is_clause_line(const P0Proof &p, int id, int before) {
    return id >= 0 && id < before && !p.lines[id].is_trail();
}
bool is_trail_line(const P0Proof &p, int id, int before) {
    return id >= 0 && id < before && p.lines[id].is_trail();
}

std::optional<LineError> line_error(const P0Proof &p, int k, const Cnf *tau) {
    const P0Line &L = p.lines[k];
    switch (L.rule) {
    case P0Rule::Axiom:
        if (tau && !tau->contains(L.clause)) return LineError{"axiom-not-in-cnf", L.clause.str()};
        return std::nullopt;
    case P0Rule::Decision:
    case P0Rule::Unit: {
        if (L.parent != -1 && !is_trail_line(p, L.parent, k)) return LineError{"bad-premise", "parent is not an earlier trail"};
        Trail base = L.parent == -1 ? Trail{} : p.lines[L.parent].trail;
        if (L.trail.size() != base.size() + 1 || !std::equal(base.begin(), base.end(), L.trail.begin()))
            return LineError{"bad-premise", "trail is not a one-step extension of its parent"};
        const Assignment &a = L.trail.back();
        if (a.var < 1 || a.var > p.num_vars || (a.val != 0 && a.val != 1))
            return LineError{"bad-assignment", "x" + std::to_string(a.var)};
        Restriction rho = trail_restriction(base, p.num_vars);
        if (rho.assigned(a.var)) return LineError{"var-assigned", "x" + std::to_string(a.var) + " already in the trail"};
        if (L.rule == P0Rule::Decision) {
            if (!a.decision) return LineError{"bad-annotation", "decision line with u annotation"};
            if (p.order.first_unassigned(rho) != a.var)
                return LineError{"not-pi-smallest", "x" + std::to_string(a.var) + " is not the π-smallest unassigned variable"};
        } else {
            if (a.decision) return LineError{"bad-annotation", "unit line with d annotation"};
            if (!is_clause_line(p, L.c1, k)) return LineError{"bad-premise", "unit needs an earlier clause line"};
            auto r = restrict_clause(p.lines[L.c1].clause, rho);
            if (!r || r->width() != 1 || r->lits()[0] != Lit::make(a.var, a.val))
                return LineError{"not-unit", "clause " + std::to_string(L.c1 + 1) + " does not restrict to x" +
                                                 std::to_string(a.var) + "^" + std::to_string(a.val)};
        }
        return std::nullopt;
    }
    case P0Rule::Learning: {
        if (!is_clause_line(p, L.c1, k) || !is_clause_line(p, L.c2, k))
            return LineError{"bad-premise", "learning premises must be earlier clause lines"};
        if (!is_trail_line(p, L.via, k)) return LineError{"bad-premise", "learning needs an earlier trail line"};
        const Clause &a = p.lines[L.c1].clause, &b = p.lines[L.c2].clause;
        auto x = unique_clash(a, b);
        if (!x) return LineError{"not-resolvable", a.str() + " / " + b.str()};
        const Trail &t = p.lines[L.via].trail;
        std::vector<int> pos(p.num_vars + 1, -1);
        for (std::size_t i = 0; i < t.size(); ++i) pos[t[i].var] = static_cast<int>(i);
        if (pos[*x] < 0) return LineError{"pivot-not-in-trail", "x" + std::to_string(*x)};
        int val = t[pos[*x]].val;
        const Clause &cside = a.sign_of(*x) == val ? a : b;
        for (int v : cside.vars())
            if (v != *x && (pos[v] < 0 || pos[v] > pos[*x]))
                return LineError{"side-not-before-pivot", "x" + std::to_string(v) + " is not assigned before x" + std::to_string(*x)};
        Clause res = *resolve(a, b, *x);
        if (!falsified(res, trail_restriction(t, p.num_vars)))
            return LineError{"resolvent-not-falsified", res.str()};
        if (res != L.clause) return LineError{"wrong-clause", "stated " + L.clause.str() + ", resolvent " + res.str()};
        return std::nullopt;
    }
    case P0Rule::Weakening:
        if (!p.allow_weakening) return LineError{"weakening-disallowed", ""};
        if (!is_clause_line(p, L.c1, k)) return LineError{"bad-premise", "weakening needs an earlier clause line"};
        if (!p.lines[L.c1].clause.subset_of(L.clause)) return LineError{"bad-weakening", L.clause.str()};
        return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace

CheckReport check_p0(const P0Proof &proof, const Cnf &tau) {
    for (std::size_t k = 0; k < proof.lines.size(); ++k)
        if (auto e = line_error(proof, static_cast<int>(k), &tau))
            return CheckReport::fail(e->code, static_cast<long>(k) + 1, e->detail);
    CheckReport ok;
    ok.size = static_cast<long>(proof.size());
    ok.width = p0_width(proof);
    return ok;
}

long p0_width(const P0Proof &proof) {
    long w = 0;
    for (const P0Line &l : proof.lines)
        if (!l.is_trail()) w = std::max(w, static_cast<long>(l.clause.width()));
    return w;
}

ResolutionProof p0_strip_to_halfordered(const P0Proof &proof) {
    ResolutionProof pi;
    pi.num_vars = proof.num_vars;
    pi.allow_weakening = proof.allow_weakening;
    std::vector<int> id(proof.lines.size(), -1);
    for (std::size_t k = 0; k < proof.lines.size(); ++k) {
        const P0Line &l = proof.lines[k];
        switch (l.rule) {
        case P0Rule::Axiom: id[k] = pi.add_axiom(l.clause); break;
        case P0Rule::Learning: {
            auto x = unique_clash(proof.lines[l.c1].clause, proof.lines[l.c2].clause);
            id[k] = pi.add_resolution(id[l.c1], id[l.c2], *x);
            break;
        }
        case P0Rule::Weakening: id[k] = pi.add_weakening(id[l.c1], l.clause); break;
        default: break;
        }
    }
    return pi;
}

// ---- builder ----

P0Builder::P0Builder(int num_vars, VarOrder order, bool allow_weakening) {
    proof_.num_vars = num_vars;
    proof_.order = std::move(order);
    proof_.allow_weakening = allow_weakening;
}

const Trail &P0Builder::trail_of(int line) const {
    static const Trail empty;
    return line < 0 ? empty : proof_.lines[line].trail;
}

std::optional<int> P0Builder::find(const Clause &c) const {
    auto it = clauses_.find(c);
    if (it == clauses_.end()) return std::nullopt;
    return it->second;
}

std::optional<int> P0Builder::find_trail(const Trail &t) const {
    if (t.empty()) return -1;
    auto it = trails_.find(t);
    if (it == trails_.end()) return std::nullopt;
    return it->second;
}

int P0Builder::axiom(const Clause &c) {
    if (auto f = find(c)) return *f;
    P0Line l;
    l.rule = P0Rule::Axiom;
    l.clause = c;
    proof_.lines.push_back(std::move(l));
    int id = static_cast<int>(proof_.lines.size()) - 1;
    clauses_.emplace(c, id);
    return id;
}

int P0Builder::add_trail(int parent, Assignment a, int clause_line) {
    Trail t = trail_of(parent);
    t.push_back(a);
    if (auto f = find_trail(t)) return *f;
    P0Line l;
    l.rule = a.decision ? P0Rule::Decision : P0Rule::Unit;
    l.trail = t;
    l.parent = parent;
    l.c1 = clause_line;
    proof_.lines.push_back(std::move(l));
    int id = static_cast<int>(proof_.lines.size()) - 1;
    if (auto e = line_error(proof_, id, nullptr)) {
        proof_.lines.pop_back();
        throw std::logic_error("P0 builder: " + e->code + ": " + e->detail + " extending " + trail_str(trail_of(parent)));
    }
    trails_.emplace(std::move(t), id);
    return id;
}

int P0Builder::decide(int trail, int var, int val) { return add_trail(trail, {var, val, true}, -1); }

int P0Builder::propagate(int trail, int var, int val, int clause_line) {
    return add_trail(trail, {var, val, false}, clause_line);
}

int P0Builder::trail(const Trail &t, const std::vector<int> &reasons) {
    int cur = -1;
    Trail prefix;
    for (std::size_t i = 0; i < t.size(); ++i) {
        prefix.push_back(t[i]);
        if (auto f = find_trail(prefix)) {
            cur = *f;
            continue;
        }
        cur = t[i].decision ? decide(cur, t[i].var, t[i].val) : propagate(cur, t[i].var, t[i].val, reasons.at(i));
    }
    return cur;
}

int P0Builder::learn(int c1, int c2, int trail) {
    auto x = unique_clash(clause(c1), clause(c2));
    if (!x) throw std::logic_error("P0 builder: premises do not resolve: " + clause(c1).str() + " / " + clause(c2).str());
    Clause res = *resolve(clause(c1), clause(c2), *x);
    P0Line l;
    l.rule = P0Rule::Learning;
    l.clause = res;
    l.c1 = c1;
    l.c2 = c2;
    l.via = trail;
    proof_.lines.push_back(std::move(l));
    int id = static_cast<int>(proof_.lines.size()) - 1;
    if (auto e = line_error(proof_, id, nullptr)) {
        proof_.lines.pop_back();
        throw std::logic_error("P0 builder: " + e->code + ": " + e->detail + " under " + trail_str(trail_of(trail)));
    }
    if (auto f = find(res)) {
        proof_.lines.pop_back();
        return *f;
    }
    clauses_.emplace(std::move(res), id);
    return id;
}

int P0Builder::weaken(int c, const Clause &target) {
    if (auto f = find(target)) return *f;
    P0Line l;
    l.rule = P0Rule::Weakening;
    l.clause = target;
    l.c1 = c;
    proof_.lines.push_back(std::move(l));
    int id = static_cast<int>(proof_.lines.size()) - 1;
    if (auto e = line_error(proof_, id, nullptr)) {
        proof_.lines.pop_back();
        throw std::logic_error("P0 builder: " + e->code + ": " + e->detail);
    }
    clauses_.emplace(target, id);
    return id;
}

// ---- file format ----

namespace {

Clause read_lits(std::istringstream &ls) {
    std::vector<int> lits;
    int d;
    bool closed = false;
    while (ls >> d) {
        if (d == 0) {
            closed = true;
            break;
        }
        lits.push_back(d);
    }
    if (!closed) throw ParseError("clause not terminated by 0");
    try {
        return Clause::from_dimacs(lits);
    } catch (const std::invalid_argument &e) {
        throw ParseError(e.what());
    }
}

void write_lits(std::ostream &out, const Clause &c) {
    for (int d : c.to_dimacs()) out << ' ' << d;
    out << " 0";
}

}  // namespace

P0Proof read_p0(std::istream &in, const std::optional<VarOrder> &order) {
    P0Proof p;
    std::string line;
    bool header = false, have_order = false;
    auto ref = [&](long id, const char *what) {
        if (id == 0) return -1;
        if (id < 0 || id > static_cast<long>(p.lines.size()))
            throw ParseError(std::string("forward or unknown ") + what + " reference " + std::to_string(id));
        return static_cast<int>(id - 1);
    };
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag[0] == 'c') continue;
        if (tag == "p") {
            std::string kind;
            if (!(ls >> kind >> p.num_vars) || kind != "p0" || p.num_vars < 0) throw ParseError("expected 'p p0 <n>'");
            header = true;
            continue;
        }
        if (!header) throw ParseError("missing 'p p0' header");
        if (tag == "o") {
            std::vector<int> ranks;
            int r;
            while (ls >> r) ranks.push_back(r);
            if (static_cast<int>(ranks.size()) != p.num_vars) throw ParseError("order line needs n ranks");
            try {
                p.order = VarOrder::from_ranks(ranks);
            } catch (const std::invalid_argument &e) {
                throw ParseError(e.what());
            }
            have_order = true;
            continue;
        }
        if (tag == "weakening") {
            p.allow_weakening = true;
            continue;
        }
        long id;
        if (!(ls >> id) || id != static_cast<long>(p.lines.size()) + 1)
            throw ParseError("line ids must be consecutive from 1 (at '" + line + "')");
        P0Line l;
        if (tag == "ax") {
            l.rule = P0Rule::Axiom;
            l.clause = read_lits(ls);
        } else if (tag == "t") {
            long parent;
            int var, val;
            std::string ann;
            if (!(ls >> parent >> var >> ann >> val) || (ann != "d" && ann != "u"))
                throw ParseError("bad trail line '" + line + "'");
            l.parent = ref(parent, "trail");
            if (l.parent >= 0 && !p.lines[l.parent].is_trail()) throw ParseError("trail parent is a clause line");
            l.trail = l.parent < 0 ? Trail{} : p.lines[l.parent].trail;
            l.trail.push_back({var, val, ann == "d"});
            l.rule = ann == "d" ? P0Rule::Decision : P0Rule::Unit;
            if (ann == "u") {
                long c;
                if (!(ls >> c)) throw ParseError("unit trail line needs a clause id");
                l.c1 = ref(c, "clause");
            }
        } else if (tag == "lr") {
            long c1, c2, t;
            if (!(ls >> c1 >> c2 >> t)) throw ParseError("bad learning line '" + line + "'");
            l.rule = P0Rule::Learning;
            l.c1 = ref(c1, "clause");
            l.c2 = ref(c2, "clause");
            l.via = ref(t, "trail");
            l.clause = read_lits(ls);
        } else if (tag == "wk") {
            long c;
            if (!(ls >> c)) throw ParseError("bad weakening line '" + line + "'");
            l.rule = P0Rule::Weakening;
            l.c1 = ref(c, "clause");
            l.clause = read_lits(ls);
        } else {
            throw ParseError("unknown p0 tag '" + tag + "'");
        }
        p.lines.push_back(std::move(l));
    }
    if (!header) throw ParseError("missing 'p p0' header");
    if (!have_order) {
        if (!order) throw ParseError("p0 file has no order line and none was supplied");
        p.order = *order;
    }
    return p;
}

void write_p0(std::ostream &out, const P0Proof &p) {
    out << "p p0 " << p.num_vars << '\n';
    if (p.order.size() == p.num_vars) {
        out << 'o';
        for (int r : p.order.ranks()) out << ' ' << r;
        out << '\n';
    }
    if (p.allow_weakening) out << "weakening\n";
    for (std::size_t k = 0; k < p.lines.size(); ++k) {
        const P0Line &l = p.lines[k];
        long id = static_cast<long>(k) + 1;
        switch (l.rule) {
        case P0Rule::Axiom:
            out << "ax " << id;
            write_lits(out, l.clause);
            break;
        case P0Rule::Decision:
        case P0Rule::Unit: {
            const Assignment &a = l.trail.back();
            out << "t " << id << ' ' << l.parent + 1 << ' ' << a.var << (a.decision ? " d " : " u ") << a.val;
            if (!a.decision) out << ' ' << l.c1 + 1;
            break;
        }
        case P0Rule::Learning:
            out << "lr " << id << ' ' << l.c1 + 1 << ' ' << l.c2 + 1 << ' ' << l.via + 1;
            write_lits(out, l.clause);
            break;
        case P0Rule::Weakening:
            out << "wk " << id << ' ' << l.c1 + 1;
            write_lits(out, l.clause);
            break;
        }
        out << '\n';
    }
}

}  // namespace pl
