#pragma once

#include <initializer_list>
#include <sstream>
#include <vector>

#include "prooflab/cnf.hpp"

namespace pl::test {

inline Clause C(std::initializer_list<int> lits) { return Clause::from_dimacs(std::vector<int>(lits)); }

inline Cnf F(int n, std::initializer_list<std::initializer_list<int>> cls) {
    std::vector<Clause> v;
    for (auto c : cls) v.push_back(C(c));
    return Cnf(n, std::move(v));
}

// Small unsatisfiable random 3-CNFs, the corpus most property tests iterate over.
std::vector<Cnf> unsat_corpus(int count, int min_n, int max_n, uint64_t seed0);

}  // namespace pl::test
