#pragma once

#include <cstdint>

#include "widthforge/cnf.hpp"
#include "widthforge/treedecomp.hpp"

namespace widthforge::testing {

// C1 = x1 v -x2, C2 = x2 v x3 v -x4 v -x5, C3 = -x4 v x5, C4 = x4 v x5
inline CnfFormula example1() {
    CnfFormula f(5);
    f.add_clause({1, -2});
    f.add_clause({2, 3, -4, -5});
    f.add_clause({-4, 5});
    f.add_clause({4, 5});
    return f;
}

// the two-bag decomposition of example1's primal graph, width 3
inline TreeDecomposition example1_primal_td() {
    TreeDecomposition t;
    t.add_node({1, 2});
    t.add_node({2, 3, 4, 5});
    t.add_edge(1, 2);
    return t;
}

// the seven-bag decomposition of example1's incidence graph, width 2
// (clause vertices are 5+i for clause i)
inline TreeDecomposition example1_incidence_td() {
    TreeDecomposition t;
    t.add_node({1, 6});       // x1 C1
    t.add_node({2, 6});       // x2 C1
    t.add_node({2, 7});       // x2 C2
    t.add_node({3, 7});       // x3 C2
    t.add_node({4, 5, 7});    // x4 x5 C2
    t.add_node({4, 5, 8});    // x4 x5 C3
    t.add_node({4, 5, 9});    // x4 x5 C4
    t.add_edge(1, 2);
    t.add_edge(2, 3);
    t.add_edge(3, 4);
    t.add_edge(3, 5);
    t.add_edge(5, 6);
    t.add_edge(5, 7);
    return t;
}

struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed ? seed : 0x9e3779b97f4a7c15ull) {}
    std::uint64_t next() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return state;
    }
    int below(int n) { return int(next() % std::uint64_t(n)); }
};

// random CNF over n variables, m clauses of width 1..maxw, no aux vars
inline CnfFormula random_cnf(std::uint64_t seed, int n, int m, int maxw) {
    Rng rng(seed);
    CnfFormula f(n);
    for (int i = 0; i < m; ++i) {
        int w = 1 + rng.below(maxw);
        std::vector<Lit> lits;
        for (int j = 0; j < w; ++j) {
            int v = 1 + rng.below(n);
            lits.push_back(rng.below(2) ? v : -v);
        }
        f.add_clause(lits);
    }
    return f;
}

} // namespace widthforge::testing
