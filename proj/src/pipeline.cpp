#include "prooflab/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <istream>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "prooflab/bounds.hpp"
#include "prooflab/oracle.hpp"
#include "prooflab/transforms.hpp"
#include "prooflab/width.hpp"

namespace pl {

using nlohmann::json;

const std::vector<StageKind> &stage_table() {
    static const std::vector<StageKind> t = {
        {"oracle", "cnf", "res"},        {"simulate", "cnf", "run"},     {"cdcl2half", "run", "res"},
        {"half2ordered", "res", "res"},  {"half2cdcl", "res", "run"},    {"cdcl2p0", "run", "p0"},
        {"p02cdcl", "p0", "run"},        {"psim", "res", "p0"},          {"p0w", "res", "p0"},
        {"indxor2", "cnf", "p0"},        {"stone", "cnf", "p0"},         {"check", "*", "*"},
        {"check-ordered", "res", "res"}, {"check-half", "res", "res"},   {"width-audit", "p0", "p0"},
    };
    return t;
}

namespace {

const StageKind *find_stage(const std::string &name) {
    for (const auto &s : stage_table())
        if (name == s.name) return &s;
    return nullptr;
}

const std::set<std::string> kFamilies = {"ind", "indxor", "random", "stone", "file"};

}  // namespace

void ExperimentSpec::validate() const {
    auto bad = [&](const std::string &m) { throw std::invalid_argument("entry '" + name + "': " + m); };
    if (!kFamilies.count(family)) bad("unknown family '" + family + "'");
    if (family == "file" && path.empty()) bad("family file needs a path");
    if (family != "file" && n < 1) bad("n must be positive");
    if (family == "indxor" && r < 1) bad("r must be positive");
    if (family == "stone" && m < n) bad("stone needs m >= n");
    if (family == "random" && (width < 1 || width > n || clauses < 1)) bad("random needs 1 <= width <= n and clauses >= 1");
    if (seeds.empty()) bad("no seeds");
    if (budget < 1) bad("budget must be positive");
    std::string kind = "cnf";
    for (const auto &st : stages) {
        const StageKind *s = find_stage(st);
        if (!s) bad("unknown stage '" + st + "'");
        if (std::string(s->in) != "*" && kind != s->in)
            bad("stage '" + st + "' takes " + s->in + " but receives " + kind);
        if (std::string(s->out) != "*") kind = s->out;
        if (st == "indxor2" && (family != "indxor" || r != 2)) bad("stage indxor2 needs family indxor with r = 2");
        if (st == "stone" && family != "stone") bad("stage stone needs family stone");
    }
}

std::vector<ExperimentSpec> read_experiments(std::istream &in) {
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception &e) {
        throw ParseError(std::string("experiment file: ") + e.what());
    }
    json entries = doc.is_array() ? doc : doc.value("entries", json::array());
    if (!entries.is_array()) throw ParseError("experiment file: entries must be an array");
    static const std::set<std::string> known = {"name",  "family",     "n",      "r",      "m",
                                                "width", "clauses",    "path",   "order",  "amendments",
                                                "policy", "stages",    "seeds",  "budget", "audit_w"};
    std::vector<ExperimentSpec> out;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const json &e = entries[i];
        if (!e.is_object()) throw ParseError("experiment entry " + std::to_string(i) + " is not an object");
        for (auto it = e.begin(); it != e.end(); ++it)
            if (!known.count(it.key())) throw ParseError("experiment entry " + std::to_string(i) + ": unknown field '" + it.key() + "'");
        ExperimentSpec s;
        try {
            s.name = e.value("name", "entry" + std::to_string(i));
            s.family = e.value("family", s.family);
            s.n = e.value("n", s.n);
            s.r = e.value("r", s.r);
            s.m = e.value("m", s.m);
            s.width = e.value("width", s.width);
            s.clauses = e.value("clauses", s.clauses);
            s.path = e.value("path", s.path);
            s.order = e.value("order", s.order);
            s.amendments = e.value("amendments", s.amendments);
            s.policy = e.value("policy", s.policy);
            s.stages = e.value("stages", s.stages);
            s.seeds = e.value("seeds", s.seeds);
            s.budget = e.value("budget", s.budget);
            s.audit_w = e.value("audit_w", s.audit_w);
        } catch (const json::exception &ex) {
            throw ParseError("experiment entry " + std::to_string(i) + ": " + ex.what());
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::string StageRecord::json() const {
    nlohmann::json j;
    j["version"] = kVersion;
    j["entry"] = entry;
    j["seed"] = seed;
    j["formula"] = formula;
    j["stage"] = stage;
    j["input_size"] = input_size;
    j["output_size"] = output_size;
    j["measured"] = measured;
    if (bound >= 0) j["bound"] = bound;
    j["pass"] = pass;
    j["ms"] = std::round(millis * 100) / 100;
    if (!detail.empty()) j["detail"] = detail;
    return j.dump();
}

std::string StageRecord::csv_header() {
    return "entry,seed,formula,stage,input_size,output_size,measured,bound,pass,ms,detail";
}

std::string StageRecord::csv() const {
    std::string d = detail;
    std::replace(d.begin(), d.end(), '"', '\'');
    std::ostringstream os;
    os << entry << ',' << seed << ',' << formula << ',' << stage << ',' << input_size << ',' << output_size << ','
       << measured << ',';
    if (bound >= 0) os << bound;
    os << ',' << (pass ? "true" : "false") << ',' << millis << ",\"" << d << '"';
    return os.str();
}

Instance build_instance(const ExperimentSpec &spec, uint64_t seed) {
    Instance in;
    VarOrder natural;
    if (spec.family == "ind") {
        in.tau = gen_induction(spec.n);
    } else if (spec.family == "indxor") {
        in.tau = xor_substitute(gen_induction(spec.n), spec.r).first;
        natural = order_row_then_column(spec.n, spec.r);
    } else if (spec.family == "random") {
        in.tau = gen_random_kcnf(spec.n, spec.clauses, spec.width, seed);
    } else if (spec.family == "stone") {
        in.graph = gen_pointed_graph(spec.n, seed);
        in.tau = gen_stone(*in.graph, spec.m);
        natural = order_stone(*in.graph, spec.m);
    } else {
        in.tau = read_dimacs_file(spec.path);
    }
    const int n = in.tau.num_vars();
    if (spec.order == "natural") {
        in.order = natural.size() ? natural : VarOrder::identity(n);
    } else if (spec.order == "identity") {
        in.order = VarOrder::identity(n);
    } else if (spec.order == "random") {
        std::vector<int> seq(n);
        for (int i = 0; i < n; ++i) seq[i] = i + 1;
        std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
        std::shuffle(seq.begin(), seq.end(), rng);
        in.order = VarOrder::from_sequence(n, std::move(seq));
    } else {
        in.order = read_order_file(spec.order, n);
    }
    return in;
}

namespace {

struct Artifacts {
    std::optional<ResolutionProof> res;
    std::optional<RunTrace> run;
    std::optional<P0Proof> p0;
    std::string kind = "cnf";

    long size() const {
        if (kind == "res") return static_cast<long>(res->size());
        if (kind == "run") return static_cast<long>(run->actions.size());
        if (kind == "p0") return static_cast<long>(p0->size());
        return 0;
    }
};

void apply_report(StageRecord &r, const CheckReport &c) {
    r.pass = c.ok;
    if (!c.ok) r.detail = c.json();
}

}  // namespace

EntryResult run_entry(const ExperimentSpec &spec, uint64_t seed) {
    EntryResult out;
    if (spec.stages.empty()) return out;
    spec.validate();
    Instance inst = build_instance(spec, seed);
    const Cnf &tau = inst.tau;
    const VarOrder &order = inst.order;
    const double n = tau.num_vars();
    const std::string hash = content_hash(tau);
    Artifacts a;

    for (const auto &st : spec.stages) {
        StageRecord r;
        r.entry = spec.name;
        r.seed = seed;
        r.formula = hash;
        r.stage = st;
        r.input_size = a.kind == "cnf" ? static_cast<long>(tau.size()) : a.size();
        auto t0 = std::chrono::steady_clock::now();
        try {
            if (st == "oracle") {
                OracleBudget b;
                b.max_clauses = spec.budget;
                SaturationResult s = saturate(tau, b);
                if (s.proof) {
                    a.res = std::move(*s.proof);
                    a.kind = "res";
                } else if (s.saturated) {
                    r.pass = false;
                    r.detail = "formula is satisfiable";
                } else {
                    throw BudgetExceeded("saturation stopped at " + std::to_string(s.clauses) + " clauses");
                }
            } else if (st == "simulate") {
                Amendments am = Amendments::parse(spec.amendments, order);
                RunResult rr = run(tau, policy_by_name(spec.policy), am, spec.budget, seed);
                if (rr.outcome == RunOutcome::Budget) throw BudgetExceeded("run stopped after " + std::to_string(spec.budget) + " steps");
                r.measured = static_cast<double>(rr.trace.actions.size());
                if (rr.outcome != RunOutcome::Success) {
                    r.pass = false;
                    r.detail = "run did not refute the formula: " + rr.detail;
                }
                a.run = std::move(rr.trace);
                a.kind = "run";
            } else if (st == "cdcl2half") {
                a.res = cdcl_to_half(*a.run, order);
                a.kind = "res";
            } else if (st == "half2ordered") {
                a.res = half_to_ordered(*a.res, order);
                r.measured = static_cast<double>(a.res->size());
                r.bound = n * static_cast<double>(r.input_size);
            } else if (st == "half2cdcl") {
                std::size_t longest = 0;
                a.run = half_proof_to_run(*a.res, tau, order, &longest);
                a.kind = "run";
                r.measured = static_cast<double>(longest);
                r.bound = n + 1;
            } else if (st == "cdcl2p0") {
                a.p0 = p0_from_cdcl(*a.run, order);
                a.kind = "p0";
                r.measured = static_cast<double>(a.p0->size());
                r.bound = n * static_cast<double>(r.input_size);
            } else if (st == "p02cdcl") {
                a.run = cdcl_from_p0(*a.p0, tau);
                a.kind = "run";
                r.measured = static_cast<double>(a.run->actions.size());
                r.bound = n * static_cast<double>(r.input_size);
            } else if (st == "psim") {
                a.p0 = psim(*a.res, tau, order);
                a.kind = "p0";
                r.measured = static_cast<double>(a.p0->size());
                r.bound = bounds::kPsim * n * n * static_cast<double>(tau.size()) * static_cast<double>(r.input_size);
            } else if (st == "p0w") {
                a.p0 = p0w_simulate(*a.res, tau, order);
                a.kind = "p0";
                r.measured = static_cast<double>(a.p0->size());
                r.bound = bounds::kP0w * n * n * static_cast<double>(r.input_size);
            } else if (st == "indxor2") {
                a.p0 = refute_ind_xor2(spec.n, order);
                a.kind = "p0";
                r.measured = static_cast<double>(a.p0->size());
                r.bound = bounds::kIndXor * spec.n * spec.n;
            } else if (st == "stone") {
                StoneReport rep;
                a.p0 = refute_stone(*inst.graph, spec.m, &rep);
                a.kind = "p0";
                r.measured = static_cast<double>(a.p0->size());
                r.bound = bounds::kStone * spec.n * std::pow(spec.m, 3);
                if (rep.stage3_not_half_ordered) {
                    r.pass = false;
                    r.detail = std::to_string(rep.stage3_not_half_ordered) + " stage-3 steps are not half-ordered";
                }
            } else if (st == "check") {
                if (a.kind == "cnf") {
                    r.detail = "nothing to check";
                } else if (a.kind == "res") {
                    apply_report(r, check_resolution(*a.res, tau));
                    if (r.pass && a.res->first_empty() < 0) {
                        r.pass = false;
                        r.detail = "proof does not derive 0";
                    }
                } else if (a.kind == "p0") {
                    apply_report(r, check_p0(*a.p0, tau));
                    if (r.pass && a.p0->first_empty() < 0) {
                        r.pass = false;
                        r.detail = "proof does not derive 0";
                    }
                } else {
                    apply_report(r, verify_run(*a.run, Amendments::parse(spec.amendments, order)));
                    if (r.pass && !a.run->terminal) {
                        r.pass = false;
                        r.detail = "run does not end in a terminal state";
                    }
                }
            } else if (st == "check-ordered") {
                apply_report(r, check_ordered(*a.res, order));
            } else if (st == "check-half") {
                apply_report(r, check_half_ordered(*a.res, order));
            } else if (st == "width-audit") {
                int w = spec.audit_w;
                if (w == 0 && spec.family == "indxor") w = (spec.r - 2) * spec.n;
                CheckReport c = audit_width_lower_bound(*a.p0, order, w);
                apply_report(r, c);
                r.measured = static_cast<double>(p0_width(*a.p0));
                r.bound = w;
            }
        } catch (const BudgetExceeded &e) {
            r.pass = false;
            r.detail = std::string("budget: ") + e.what();
            out.budget = true;
        } catch (const LearningBudgetExceeded &e) {
            r.pass = false;
            r.detail = std::string("budget: ") + e.what();
            out.budget = true;
        } catch (const std::exception &e) {
            r.pass = false;
            r.detail = e.what();
        }
        r.output_size = a.kind == "cnf" ? static_cast<long>(tau.size()) : a.size();
        if (r.measured < 0) r.measured = static_cast<double>(r.output_size);
        if (r.pass && r.bound >= 0) {
            // width-audit bounds from below, every other stage from above
            bool within = st == "width-audit" ? r.measured >= r.bound : r.measured <= r.bound;
            if (!within) {
                r.pass = false;
                r.detail = "bound violated";
            }
        }
        r.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        out.stages.push_back(r);
        if (!r.pass) {
            out.ok = false;
            out.failed_stage = st;
            break;
        }
    }
    return out;
}

}  // namespace pl
