#pragma once

#include <optional>

#include "widthforge/block_projection.hpp"
#include "widthforge/cliquewidth.hpp"
#include "widthforge/compile.hpp"
#include "widthforge/cwexpr.hpp"
#include "widthforge/dnnf.hpp"
#include "widthforge/treedecomp.hpp"

namespace widthforge {

// Output of a re-encoding construction: the new formula plus every witness
// the construction promises, and the block structure its semantic
// verification runs on.
struct EncodingResult {
    CnfFormula formula;
    std::optional<TreeDecomposition> td_witness;       // primal decomposition
    std::optional<TreeDecomposition> special_witness;  // special primal decomposition
    std::optional<CwExpression> scw_witness;           // signed incidence expression
    std::optional<CwExpression> cw_witness;            // unsigned incidence expression
    std::optional<TreeDecomposition> mtw_witness;      // decomposition of the contracted incidence graph
    bool dependent = false;
    BlockTree blocks;
    int source_width = 0; // the k the size laws refer to
};

// Proof-tree guessing encoding: one variable block per v-tree node choosing
// an or-gate and an and-gate (gate choices at leaves fold into the parent
// and-code). The decomposition over the v-tree has bags X_t u X_t1 u X_t2
// plus leaf variables and is special. With kl := max(2, wi(D)) — the binary
// index laws degenerate at width 1, where a node may still hold up to four
// and-gates whose choice costs a bit — the construction guarantees:
//   auxiliary variables <= n*(3*ceil(log2 kl)+1)
//   clauses            <= 3*n*kl^3 + 4*n
//   decomposition width <= 9*ceil(log2 kl) + 1
EncodingResult dnnf_to_cnf(const StructuredDnnf &d);

// Same construction followed by the special-decomposition-to-signed-
// cliquewidth translation; the expression is validated before returning.
EncodingResult dnnf_to_scw(const StructuredDnnf &d);

// Grouping construction: per-node variable copies in ceil(log2 n)-sized
// color groups, equality blocks between adjacent copies, per-clause selector
// variables, and the selector disjunction replacing each original clause.
// Emits a modular-treewidth witness of width <= 6*(k+1) - 1 and an unsigned
// k-expression with <= 13*(k+1) + 2 labels.
EncodingResult cliquegood(const CnfFormula &f, const TreeDecomposition &t);

enum class DependentMode { automatic, require, plain };

// compile -> reduce -> forget aux vars -> dnnf_to_cnf. The dependent path
// forgets with the determinism-preserving rule; `automatic` picks it when the
// input encoding has dependent auxiliary variables.
EncodingResult pipeline_reverse(const CnfFormula &f, const TreeDecomposition &t,
                                DependentMode mode = DependentMode::automatic);

// Semantic verification of an encoding result against a function table,
// using the brute-force oracle when the formula fits the cap and the block
// DP otherwise. Returns a human-readable failure description or empty.
std::string verify_encoding(const EncodingResult &enc, const FunctionSpec &spec,
                            bool check_dependent);

} // namespace widthforge
