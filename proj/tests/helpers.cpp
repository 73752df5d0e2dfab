#include "helpers.hpp"

#include "prooflab/oracle.hpp"

namespace pl::test {

std::vector<Cnf> unsat_corpus(int count, int min_n, int max_n, uint64_t seed0) {
    std::vector<Cnf> out;
    for (uint64_t s = seed0; static_cast<int>(out.size()) < count; ++s) {
        int n = min_n + static_cast<int>(s % static_cast<uint64_t>(max_n - min_n + 1));
        Cnf tau = gen_random_kcnf(n, 6 * n, 3, s);
        if (!dpll_sat(tau)) out.push_back(std::move(tau));
    }
    return out;
}

}  // namespace pl::test
