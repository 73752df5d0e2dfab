// prooflab command-line driver.  Exit codes: 0 ok, 1 violation, 2 usage or
// parse error, 3 budget exhausted.

#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "prooflab/bounds.hpp"
#include "prooflab/oracle.hpp"
#include "prooflab/pipeline.hpp"
#include "prooflab/transforms.hpp"
#include "prooflab/width.hpp"

using nlohmann::json;
using namespace pl;

namespace {

enum Exit { kOk = 0, kViolation = 1, kUsage = 2, kBudget = 3 };

// Bad flags or parameters; inputs that break a rule surface as
// std::invalid_argument or std::logic_error and count as violations.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class F>
auto as_usage(F &&f) -> decltype(f()) {
    try {
        return f();
    } catch (const std::invalid_argument &e) {
        throw UsageError(e.what());
    }
}

std::ifstream open_in(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return in;
}

std::string file_hash(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return "";
    uint64_t h = 1469598103934665603ULL;
    char c;
    while (in.get(c)) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ULL;
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json base_report(const std::string &command) {
    json j;
    j["command"] = command;
    j["version"] = kVersion;
    return j;
}

// Artifacts go to --out, or stdout when none is given; the JSON report then
// moves to stderr so stdout stays parseable.
void emit(const std::string &out, const std::function<void(std::ostream &)> &write, const json &report) {
    if (out.empty()) {
        write(std::cout);
        std::cerr << report.dump() << '\n';
        return;
    }
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write " + out);
    write(f);
    std::cout << report.dump() << '\n';
}

void report_only(const json &report) { std::cout << report.dump() << '\n'; }

VarOrder load_order(const std::string &spec, int n) {
    if (spec.empty() || spec == "identity") return VarOrder::identity(n);
    return read_order_file(spec, n);
}

std::optional<VarOrder> maybe_order(const std::string &spec, int n) {
    if (spec.empty()) return std::nullopt;
    return load_order(spec, n);
}

ResolutionProof load_proof(const std::string &path) {
    auto in = open_in(path);
    return read_proof(in);
}

P0Proof load_p0(const std::string &path, const std::optional<VarOrder> &order) {
    auto in = open_in(path);
    return read_p0(in, order);
}

RunTrace load_trace(const std::string &path, const Cnf &tau) {
    auto in = open_in(path);
    return read_trace(in, tau);
}

std::string with_suffix(const std::string &out, const std::string &given, const char *suffix) {
    if (!given.empty()) return given;
    return out.empty() ? "" : out + suffix;
}

// ---- gen ----

struct GenArgs {
    std::string family, out, order_out, graph_out;
    int n = 0, r = 2, m = 0, k = 3;
    uint64_t seed = 1;
};

int cmd_gen_impl(const GenArgs &a) {
    Cnf tau;
    std::optional<VarOrder> order;
    std::optional<PointedGraph> graph;
    if (a.family == "ind") {
        tau = gen_induction(a.n);
    } else if (a.family == "indxor") {
        tau = xor_substitute(gen_induction(a.n), a.r).first;
        order = order_row_then_column(a.n, a.r);
    } else if (a.family == "random") {
        tau = gen_random_kcnf(a.n, a.m, a.k, a.seed);
    } else if (a.family == "stone") {
        graph = gen_pointed_graph(a.n, a.seed);
        tau = gen_stone(*graph, a.m);
        order = order_stone(*graph, a.m);
    } else {
        throw UsageError("unknown family '" + a.family + "'");
    }
    if (!order) order = VarOrder::identity(tau.num_vars());
    std::ostringstream tag;
    tag << "prooflab gen " << a.family << " n=" << a.n;
    if (a.family == "indxor") tag << " r=" << a.r;
    if (a.family == "random" || a.family == "stone") tag << " m=" << a.m << " seed=" << a.seed;
    if (a.family == "random") tag << " k=" << a.k;
    tau.comments = {tag.str()};

    json rep = base_report("gen");
    rep["family"] = a.family;
    rep["seed"] = a.seed;
    rep["vars"] = tau.num_vars();
    rep["clauses"] = tau.size();
    rep["formula"] = content_hash(tau);
    std::string order_out = with_suffix(a.out, a.order_out, ".order");
    std::string graph_out = with_suffix(a.out, a.graph_out, ".graph");
    if (!order_out.empty()) {
        std::ofstream f(order_out);
        if (!f) throw std::runtime_error("cannot write " + order_out);
        write_order(f, *order);
        rep["order_file"] = order_out;
    }
    if (graph && !graph_out.empty()) {
        std::ofstream f(graph_out);
        if (!f) throw std::runtime_error("cannot write " + graph_out);
        write_graph(f, *graph);
        rep["graph_file"] = graph_out;
    }
    emit(a.out, [&](std::ostream &o) { write_dimacs(o, tau); }, rep);
    return kOk;
}

int cmd_gen(const GenArgs &a) {
    return as_usage([&] { return cmd_gen_impl(a); });
}

// ---- prove ----

struct ProveArgs {
    std::string cnf, method = "saturate", order, out;
    long max_clauses = 200000;
    int max_width = 1 << 20;
    double seconds = 60;
};

int cmd_prove(const ProveArgs &a) {
    Cnf tau = read_dimacs_file(a.cnf);
    OracleBudget b;
    b.max_clauses = a.max_clauses;
    b.max_width = a.max_width;
    b.max_seconds = a.seconds;
    json rep = base_report("prove");
    rep["method"] = a.method;
    rep["formula"] = content_hash(tau);
    if (a.method == "saturate") {
        SaturationResult s = saturate(tau, b);
        rep["clauses"] = s.clauses;
        if (s.proof) {
            rep["status"] = "refuted";
            rep["size"] = proof_size(*s.proof);
            rep["width"] = proof_width(*s.proof);
            emit(a.out, [&](std::ostream &o) { write_proof(o, *s.proof); }, rep);
            return kOk;
        }
        rep["status"] = s.saturated ? "satisfiable" : "budget";
        report_only(rep);
        return s.saturated ? kViolation : kBudget;
    }
    if (a.method == "ordered-width") {
        VarOrder order = load_order(a.order, tau.num_vars());
        auto w = min_ordered_width(tau, order, b);
        rep["status"] = w ? "refuted" : "none";
        if (w) rep["width"] = *w;
        report_only(rep);
        return w ? kOk : kViolation;
    }
    if (a.method == "dpll") {
        auto model = dpll_model(tau);
        rep["status"] = model ? "satisfiable" : "unsatisfiable";
        if (model) {
            json m = json::array();
            for (int v = 1; v <= tau.num_vars(); ++v) m.push_back(model->get(v) == 1 ? v : -v);
            rep["model"] = m;
        }
        report_only(rep);
        return kOk;
    }
    throw UsageError("unknown method '" + a.method + "'");
}

// ---- check ----

struct CheckArgs {
    std::string kind, cnf, proof, order, amendments;
};

int cmd_check(const CheckArgs &a) {
    Cnf tau = read_dimacs_file(a.cnf);
    const int n = tau.num_vars();
    CheckReport r;
    bool refutation = false;
    if (a.kind == "res" || a.kind == "ordered" || a.kind == "half") {
        ResolutionProof pi = load_proof(a.proof);
        r = check_resolution(pi, tau);
        if (r.ok && a.kind == "ordered") r = check_ordered(pi, load_order(a.order, n));
        if (r.ok && a.kind == "half") r = check_half_ordered(pi, load_order(a.order, n));
        refutation = pi.first_empty() >= 0;
    } else if (a.kind == "p0") {
        P0Proof p = load_p0(a.proof, maybe_order(a.order, n));
        r = check_p0(p, tau);
        refutation = p.first_empty() >= 0;
    } else if (a.kind == "run") {
        RunTrace t = load_trace(a.proof, tau);
        VarOrder order = load_order(a.order, n);
        r = verify_run(t, as_usage([&] { return Amendments::parse(a.amendments, order); }));
        refutation = t.terminal && (tau.has_empty() || std::any_of(t.actions.begin(), t.actions.end(), [](const Action &x) {
                                        return x.kind == ActionKind::Learn && x.clause.empty();
                                    }));
    } else {
        throw UsageError("unknown check kind '" + a.kind + "'");
    }
    json rep = base_report("check");
    rep["kind"] = a.kind;
    rep["formula"] = content_hash(tau);
    rep["input"] = file_hash(a.proof);
    rep["report"] = json::parse(r.json());
    rep["refutation"] = refutation;
    report_only(rep);
    return r.ok ? kOk : kViolation;
}

// ---- simulate ----

struct SimArgs {
    std::string cnf, order, amendments, policy = "greedy-random", out;
    uint64_t seed = 1;
    long budget = 1000000, learn_budget = 10000;
};

int cmd_simulate(const SimArgs &a) {
    Cnf tau = read_dimacs_file(a.cnf);
    VarOrder order = load_order(a.order, tau.num_vars());
    Amendments am = as_usage([&] { return Amendments::parse(a.amendments, order); });
    RunResult res = run(tau, policy_by_name(a.policy), am, a.budget, a.seed, a.learn_budget);
    static const char *names[] = {"success", "stuck", "budget", "learn-overflow"};
    json rep = base_report("simulate");
    rep["formula"] = content_hash(tau);
    rep["seed"] = a.seed;
    rep["policy"] = a.policy;
    rep["amendments"] = am.str();
    rep["outcome"] = names[static_cast<int>(res.outcome)];
    rep["steps"] = res.trace.actions.size();
    if (!res.detail.empty()) rep["detail"] = res.detail;
    emit(a.out, [&](std::ostream &o) { write_trace(o, res.trace); }, rep);
    switch (res.outcome) {
        case RunOutcome::Success: return kOk;
        case RunOutcome::Stuck: return kViolation;
        default: return kBudget;
    }
}

// ---- transform ----

struct TransformArgs {
    std::string kind, cnf, in, order, out, vars;
};

std::vector<int> parse_vars(const std::string &s) {
    std::vector<int> v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) v.push_back(std::stoi(tok));
    return v;
}

int cmd_transform(const TransformArgs &a) {
    Cnf tau = read_dimacs_file(a.cnf);
    const double n = tau.num_vars();
    VarOrder order = load_order(a.order, tau.num_vars());
    json rep = base_report("transform");
    rep["transform"] = a.kind;
    rep["formula"] = content_hash(tau);
    rep["input"] = file_hash(a.in);
    long in_size = 0, out_size = 0;
    double measured = -1, bound = -1;
    std::function<void(std::ostream &)> write;
    std::optional<ResolutionProof> res;
    std::optional<P0Proof> p0;
    std::optional<RunTrace> trace;

    const std::string &k = a.kind;
    if (k == "half2ordered" || k == "half2cdcl" || k == "delete" || k == "psim" || k == "p0w") {
        ResolutionProof pi = load_proof(a.in);
        in_size = static_cast<long>(pi.size());
        if (k == "half2ordered") {
            res = half_to_ordered(pi, order);
            bound = n * static_cast<double>(in_size);
        } else if (k == "half2cdcl") {
            std::size_t longest = 0;
            trace = half_proof_to_run(pi, tau, order, &longest);
            measured = static_cast<double>(longest);
            bound = n + 1;
            rep["longest_fragment"] = longest;
        } else if (k == "delete") {
            DeletionReport dr;
            res = delete_vars(pi, parse_vars(a.vars), &dr);
            bound = static_cast<double>(in_size - dr.s_resolutions);
            rep["s_resolutions"] = dr.s_resolutions;
            rep["dummy_edges"] = dr.dummy_edges;
        } else if (k == "psim") {
            PsimReport pr;
            p0 = psim(pi, tau, order, &pr);
            bound = bounds::kPsim * n * n * static_cast<double>(tau.size()) * static_cast<double>(in_size);
            rep["calls"] = pr.calls;
            rep["disjoint"] = pr.disjoint;
            if (!pr.out_of_scope.empty()) rep["out_of_scope"] = pr.out_of_scope;
        } else {
            p0 = p0w_simulate(pi, tau, order);
            bound = bounds::kP0w * n * n * static_cast<double>(in_size);
        }
    } else if (k == "cdcl2half" || k == "cdcl2p0") {
        RunTrace t = load_trace(a.in, tau);
        in_size = static_cast<long>(t.actions.size());
        if (k == "cdcl2half") {
            res = cdcl_to_half(t, order);
        } else {
            p0 = p0_from_cdcl(t, order);
            bound = n * static_cast<double>(in_size);
        }
    } else if (k == "p02cdcl" || k == "lift") {
        // lift reads a proof over ψ, ordered by order minus its first variable
        std::optional<VarOrder> po = a.order.empty() ? std::nullopt : std::optional<VarOrder>(k == "lift" ? order.without(order.var_at(1)) : order);
        P0Proof p = load_p0(a.in, po);
        in_size = static_cast<long>(p.size());
        if (k == "p02cdcl") {
            trace = cdcl_from_p0(p, tau);
            bound = n * static_cast<double>(in_size);
        } else {
            p0 = lift(p, tau, order);
        }
    } else {
        throw UsageError("unknown transform '" + k + "'");
    }

    if (res) {
        out_size = static_cast<long>(res->size());
        write = [&](std::ostream &o) { write_proof(o, *res); };
    } else if (p0) {
        out_size = static_cast<long>(p0->size());
        write = [&](std::ostream &o) { write_p0(o, *p0); };
    } else {
        out_size = static_cast<long>(trace->actions.size());
        write = [&](std::ostream &o) { write_trace(o, *trace); };
    }
    if (measured < 0) measured = static_cast<double>(out_size);
    rep["input_size"] = in_size;
    rep["output_size"] = out_size;
    rep["measured"] = measured;
    bool within = bound < 0 || measured <= bound;
    if (bound >= 0) rep["bound"] = bound;
    rep["within_bound"] = within;
    emit(a.out, write, rep);
    return within ? kOk : kViolation;
}

// ---- width ----

struct WidthArgs {
    std::string cnf, order, proof, kind = "p0";
    int k = 0, w = 0, amend_w = -1;
    long budget = 2000000;
};

int cmd_width_robust(const WidthArgs &a) {
    Cnf tau = read_dimacs_file(a.cnf);
    VarOrder order = load_order(a.order, tau.num_vars());
    RobustnessCertificate c = as_usage([&] { return check_robust(tau, order, a.k, a.budget); });
    json rep = base_report("width robust");
    rep["certificate"] = json::parse(c.json());
    report_only(rep);
    if (c.counterexample) return kViolation;
    return c.complete ? kOk : kBudget;
}

int cmd_width_audit(const WidthArgs &a) {
    Cnf tau = read_dimacs_file(a.cnf);
    VarOrder order = load_order(a.order, tau.num_vars());
    json rep = base_report("width audit");
    rep["formula"] = content_hash(tau);
    rep["input"] = file_hash(a.proof);
    rep["w"] = a.w;
    CheckReport r;
    if (a.kind == "p0") {
        P0Proof p = load_p0(a.proof, order);
        r = audit_width_lower_bound(p, order, a.w);
    } else if (a.kind == "run") {
        RunTrace t = load_trace(a.proof, tau);
        CdclWidthAudit au = audit_cdcl_width(t, order, a.amend_w < 0 ? tau.num_vars() : a.amend_w, a.w);
        rep["successful"] = au.successful;
        rep["max_learned_width"] = au.max_learned_width;
        r = au.report;
    } else {
        throw UsageError("unknown audit kind '" + a.kind + "'");
    }
    rep["report"] = json::parse(r.json());
    report_only(rep);
    return r.ok ? kOk : kViolation;
}

// ---- pipeline ----

struct PipelineArgs {
    std::string spec, csv, jsonl;
    int jobs = 1;
};

int cmd_pipeline(const PipelineArgs &a) {
    auto in = open_in(a.spec);
    std::vector<ExperimentSpec> specs = read_experiments(in);
    for (const auto &s : specs) as_usage([&] { s.validate(); });

    struct Job {
        const ExperimentSpec *spec;
        uint64_t seed;
    };
    std::vector<Job> jobs;
    for (const auto &s : specs)
        for (uint64_t seed : s.seeds) jobs.push_back({&s, seed});

    // Entries are independent; each one runs its stages in sequence.
    std::vector<EntryResult> results(jobs.size());
    const std::size_t width = static_cast<std::size_t>(std::max(1, a.jobs));
    for (std::size_t lo = 0; lo < jobs.size(); lo += width) {
        std::vector<std::future<EntryResult>> fut;
        for (std::size_t i = lo; i < std::min(jobs.size(), lo + width); ++i)
            fut.push_back(std::async(std::launch::async, [&, i] { return run_entry(*jobs[i].spec, jobs[i].seed); }));
        for (std::size_t i = lo; i < std::min(jobs.size(), lo + width); ++i) results[i] = fut[i - lo].get();
    }

    std::ofstream csv, jl;
    if (!a.csv.empty()) {
        csv.open(a.csv);
        if (!csv) throw std::runtime_error("cannot write " + a.csv);
        csv << StageRecord::csv_header() << '\n';
    }
    if (!a.jsonl.empty()) {
        jl.open(a.jsonl);
        if (!jl) throw std::runtime_error("cannot write " + a.jsonl);
    }
    std::ostream &lines = a.jsonl.empty() ? std::cout : jl;
    bool failed = false, budget = false;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        for (const auto &r : results[i].stages) {
            lines << r.json() << '\n';
            if (csv.is_open()) csv << r.csv() << '\n';
        }
        if (!results[i].ok) {
            const auto &last = results[i].stages.back();
            std::cerr << "entry " << jobs[i].spec->name << " seed " << jobs[i].seed << ": stage "
                      << results[i].failed_stage << " failed: " << last.detail << '\n';
            (results[i].budget ? budget : failed) = true;
        }
    }
    if (!a.jsonl.empty() || !a.csv.empty()) {
        json rep = base_report("pipeline");
        rep["spec"] = file_hash(a.spec);
        rep["runs"] = jobs.size();
        rep["failed"] = failed;
        rep["budget"] = budget;
        if (!a.jsonl.empty()) report_only(rep);
    }
    return failed ? kViolation : budget ? kBudget : kOk;
}

// ---- dot ----

struct DotArgs {
    std::string proof, kind = "res", order, out;
};

int cmd_dot(const DotArgs &a) {
    ResolutionProof pi;
    if (a.kind == "res") {
        pi = load_proof(a.proof);
    } else if (a.kind == "p0") {
        pi = p0_strip_to_halfordered(load_p0(a.proof, a.order.empty() ? std::nullopt : std::optional<VarOrder>(read_order_file(a.order))));
    } else {
        throw UsageError("unknown proof kind '" + a.kind + "'");
    }
    json rep = base_report("dot");
    rep["input"] = file_hash(a.proof);
    rep["nodes"] = pi.size();
    emit(a.out, [&](std::ostream &o) { write_dot(o, pi); }, rep);
    return kOk;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"prooflab: resolution, CDCL and trail-proof experiments"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("prooflab ") + kVersion);
    std::function<int()> action;

    GenArgs ga;
    auto *gen = app.add_subcommand("gen", "generate a formula with its order file");
    gen->add_option("family", ga.family, "ind | indxor | random | stone")->required();
    gen->add_option("--n", ga.n, "variables, Ind size, or graph vertices")->required();
    gen->add_option("--r", ga.r, "parity width (indxor)");
    gen->add_option("--m", ga.m, "clauses (random) or stones (stone)");
    gen->add_option("--k", ga.k, "clause width (random)");
    gen->add_option("--seed", ga.seed);
    gen->add_option("--out", ga.out, "DIMACS output (default stdout)");
    gen->add_option("--order-out", ga.order_out, "order file (default <out>.order)");
    gen->add_option("--graph-out", ga.graph_out, "pointed graph (default <out>.graph)");
    gen->callback([&] { action = [&] { return cmd_gen(ga); }; });

    ProveArgs pa;
    auto *prove = app.add_subcommand("prove", "reference oracles");
    prove->add_option("--cnf", pa.cnf)->required();
    prove->add_option("--method", pa.method, "saturate | ordered-width | dpll");
    prove->add_option("--order", pa.order);
    prove->add_option("--out", pa.out);
    prove->add_option("--max-clauses", pa.max_clauses);
    prove->add_option("--max-width", pa.max_width);
    prove->add_option("--seconds", pa.seconds);
    prove->callback([&] { action = [&] { return cmd_prove(pa); }; });

    CheckArgs ca;
    auto *check = app.add_subcommand("check", "validate a proof or run");
    check->add_option("kind", ca.kind, "res | ordered | half | p0 | run")->required();
    check->add_option("--cnf", ca.cnf)->required();
    check->add_option("--proof", ca.proof, "proof or trace file")->required();
    check->add_option("--order", ca.order);
    check->add_option("--amendments", ca.amendments, "run: comma separated amendment list");
    check->callback([&] { action = [&] { return cmd_check(ca); }; });

    SimArgs sa;
    auto *sim = app.add_subcommand("simulate", "run the CDCL system under a policy");
    sim->add_option("--cnf", sa.cnf)->required();
    sim->add_option("--order", sa.order);
    sim->add_option("--amendments", sa.amendments);
    sim->add_option("--policy", sa.policy, "greedy-random | random | unit-first-lex");
    sim->add_option("--seed", sa.seed);
    sim->add_option("--budget", sa.budget, "step budget");
    sim->add_option("--learn-budget", sa.learn_budget);
    sim->add_option("--out", sa.out);
    sim->callback([&] { action = [&] { return cmd_simulate(sa); }; });

    TransformArgs ta;
    auto *tr = app.add_subcommand("transform", "proof and run transformations");
    tr->add_option("kind", ta.kind,
                   "half2ordered | cdcl2half | half2cdcl | p02cdcl | cdcl2p0 | delete | lift | psim | p0w")
        ->required();
    tr->add_option("--cnf", ta.cnf)->required();
    tr->add_option("--in", ta.in)->required();
    tr->add_option("--order", ta.order);
    tr->add_option("--out", ta.out);
    tr->add_option("--vars", ta.vars, "delete: comma separated variables");
    tr->callback([&] { action = [&] { return cmd_transform(ta); }; });

    WidthArgs wa;
    auto *width = app.add_subcommand("width", "robustness and width audits");
    width->require_subcommand(1);
    auto *robust = width->add_subcommand("robust", "exhaustive robustness check");
    robust->add_option("--cnf", wa.cnf)->required();
    robust->add_option("--order", wa.order);
    robust->add_option("--k", wa.k)->required();
    robust->add_option("--budget", wa.budget);
    robust->callback([&] { action = [&] { return cmd_width_robust(wa); }; });
    auto *audit = width->add_subcommand("audit", "width lower bound audit of a trail proof or run");
    audit->add_option("--cnf", wa.cnf)->required();
    audit->add_option("--proof", wa.proof)->required();
    audit->add_option("--order", wa.order);
    audit->add_option("--w", wa.w)->required();
    audit->add_option("--kind", wa.kind, "p0 | run");
    audit->add_option("--amend-w", wa.amend_w, "run: WIDTH amendment bound");
    audit->callback([&] { action = [&] { return cmd_width_audit(wa); }; });

    PipelineArgs pla;
    auto *pipe = app.add_subcommand("pipeline", "batch experiments from a JSON spec");
    pipe->add_option("--spec", pla.spec)->required();
    pipe->add_option("--csv", pla.csv);
    pipe->add_option("--jsonl", pla.jsonl, "JSON lines (default stdout)");
    pipe->add_option("--jobs", pla.jobs);
    pipe->callback([&] { action = [&] { return cmd_pipeline(pla); }; });

    DotArgs da;
    auto *dot = app.add_subcommand("dot", "Graphviz rendering of a proof");
    dot->add_option("--proof", da.proof)->required();
    dot->add_option("--kind", da.kind, "res | p0");
    dot->add_option("--order", da.order);
    dot->add_option("--out", da.out);
    dot->callback([&] { action = [&] { return cmd_dot(da); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kUsage;
    }
    try {
        return action();
    } catch (const ParseError &e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kUsage;
    } catch (const UsageError &e) {
        std::cerr << "usage: " << e.what() << '\n';
        return kUsage;
    } catch (const BudgetExceeded &e) {
        std::cerr << "budget: " << e.what() << '\n';
        return kBudget;
    } catch (const LearningBudgetExceeded &e) {
        std::cerr << "budget: " << e.what() << '\n';
        return kBudget;
    } catch (const std::logic_error &e) {
        std::cerr << "violation: " << e.what() << '\n';
        return kViolation;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kViolation;
    }
}
