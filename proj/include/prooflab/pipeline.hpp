#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "prooflab/cdcl.hpp"
#include "prooflab/cnf.hpp"
#include "prooflab/p0.hpp"
#include "prooflab/resproof.hpp"

namespace pl {

inline constexpr const char *kVersion = "1.0.0";

// Raised when a search or run stops on its budget rather than on an answer.
struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One batch entry.  family: ind | indxor | random | stone | file.
struct ExperimentSpec {
    std::string name;
    std::string family = "ind";
    int n = 4, r = 2, m = 0, width = 3, clauses = 0;
    std::string path;                // family = file
    std::string order = "natural";   // natural | identity | random | <file>
    std::string amendments;
    std::string policy = "greedy-random";
    std::vector<std::string> stages;
    std::vector<uint64_t> seeds{1};
    long budget = 1000000;
    int audit_w = 0;  // width-audit stage

    // Throws std::invalid_argument naming the bad field or stage pair.
    void validate() const;
};

std::vector<ExperimentSpec> read_experiments(std::istream &in);

struct StageRecord {
    std::string entry;
    uint64_t seed = 0;
    std::string stage;
    std::string formula;  // content hash of the input CNF
    long input_size = 0, output_size = 0;
    double measured = -1;  // compared against bound; defaults to output_size
    double bound = -1;    // -1: the stage asserts no bound
    bool pass = true;
    std::string detail;
    double millis = 0;

    std::string json() const;
    std::string csv() const;
    static std::string csv_header();
};

struct EntryResult {
    std::vector<StageRecord> stages;
    bool ok = true;
    bool budget = false;
    std::string failed_stage;
};

struct Instance {
    Cnf tau;
    VarOrder order;
    std::optional<PointedGraph> graph;  // stone family
};

// The formula and order an entry describes, for a given seed.
Instance build_instance(const ExperimentSpec &spec, uint64_t seed);
EntryResult run_entry(const ExperimentSpec &spec, uint64_t seed);

// Stage names with their input and output artifact kinds (cnf, res, run, p0).
struct StageKind {
    const char *name, *in, *out;
};
const std::vector<StageKind> &stage_table();

}  // namespace pl
