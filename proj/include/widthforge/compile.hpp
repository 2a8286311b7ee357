#pragma once

#include "widthforge/dnnf.hpp"
#include "widthforge/treedecomp.hpp"

namespace widthforge {

// Nice form of a rooted tree decomposition: leaf bags are empty, introduce
// adds one vertex, forget removes one, join children carry equal bags. The
// root bag is empty, so every variable is forgotten exactly once.
struct NiceDecomposition {
    enum class Kind : unsigned char { leaf, introduce, forget, join };
    struct Node {
        Kind kind;
        int var = 0;            // introduce/forget
        int child1 = -1, child2 = -1;
        std::vector<int> bag;   // sorted
    };
    std::vector<Node> nodes;    // children precede parents
    int root = -1;
    int width() const;
};

NiceDecomposition make_nice(const TreeDecomposition &t);

// V-tree derived from the decomposition: each variable's leaf hangs at the
// point where the nice decomposition forgets it, so the boundary of every
// v-tree subtree is covered by a bag.
VTree td_to_vtree(const CnfFormula &f, const TreeDecomposition &t);

// Compiles F into an equivalent complete structured deterministic DNNF of
// width at most 2^(width(T)+1). Every clause must fit inside some bag.
// Unsatisfiable inputs yield the 0-model marker, variable-free ones the
// 1-model marker; one-variable tautologies also degenerate to a marker
// because the formalism has no constant gates.
StructuredDnnf compile_cnf(const CnfFormula &f, const TreeDecomposition &t);

struct CompileLog {
    int td_width = 0;
    bool td_exact = false;
    int dnnf_width = 0;
    std::uint64_t gate_count = 0;
};

// Decomposition (exact under the cap, else min-fill) followed by compile_cnf.
CompileLog compile_widths(const CnfFormula &f, StructuredDnnf *out = nullptr,
                          TreeDecomposition *td_out = nullptr);

} // namespace widthforge
