#pragma once

#include <optional>

#include "prooflab/cnf.hpp"
#include "prooflab/resproof.hpp"

namespace pl {

struct OracleBudget {
    long max_clauses = 200000;
    int max_width = 1 << 20;
    double max_seconds = 60.0;
};

struct SaturationResult {
    std::optional<ResolutionProof> proof;  // set when 0 was derived
    bool saturated = false;                // closure finished without 0: satisfiable
    long clauses = 0;                      // size of the clause database at exit
};

// Breadth-first (width-first) resolution closure with duplicate removal only.
SaturationResult saturate(const Cnf &tau, const OracleBudget &budget = {});

bool dpll_sat(const Cnf &tau);
std::optional<Restriction> dpll_model(const Cnf &tau);

// Least w such that π-ordered resolution over clauses of width <= w derives 0.
std::optional<int> min_ordered_width(const Cnf &tau, const VarOrder &order, const OracleBudget &budget = {});

}  // namespace pl
