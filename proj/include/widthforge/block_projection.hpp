#pragma once

#include <vector>

#include "widthforge/function_spec.hpp"
#include "widthforge/oracle.hpp"

namespace widthforge {

// Tree of disjoint variable blocks used to project formulas that exceed the
// brute-force cap. Every clause must fit inside one block together with its
// parent block. The projection DP enumerates block-local assignments, so it
// is exact while only reading the clause list; it serves as the independent
// semantic check for the width-law constructions whose outputs are too large
// for the 2^n oracle.
struct BlockTree {
    struct Node {
        std::vector<Var> aux;    // auxiliary variables owned by this block
        std::vector<Var> inputs; // input variables owned by this block
        int parent = -1;         // root has -1
    };
    std::vector<Node> nodes;

    int add(std::vector<Var> aux, std::vector<Var> inputs, int parent);
    bool empty() const { return nodes.empty(); }
};

struct BlockProjection {
    FunctionSpec projection;     // onto the formula's input variables
    bool unique_extension;       // every onset row has exactly one model
};

// Exact projection of F onto its inputs via dynamic programming over the
// block tree. Fails if the blocks do not partition F's variables, a clause
// does not fit, or a block is too large to enumerate.
BlockProjection project_via_blocks(const CnfFormula &f, const BlockTree &bt);

} // namespace widthforge
