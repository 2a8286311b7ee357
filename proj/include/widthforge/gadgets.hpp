#pragma once

#include <optional>

#include "widthforge/block_projection.hpp"
#include "widthforge/cnf.hpp"
#include "widthforge/function_spec.hpp"
#include "widthforge/treedecomp.hpp"

namespace widthforge {

struct GadgetOutput {
    CnfFormula formula;
    std::optional<FunctionSpec> spec; // absent when the table would exceed the cap
    TreeDecomposition td_witness;
    BlockTree blocks;                 // empty when no path/tree structure applies
};

// Quadratic representation without auxiliary variables; primal graph K_n.
GadgetOutput amo_naive(int n);

// Ladder encoding with prefix-disjunction variables y_0..y_n; width-2 path
// decomposition. y_0 is pinned to 0 so every auxiliary value is forced.
GadgetOutput amo_ladder(int n);

// Binary counter for sum(x) <= threshold: clamped partial sums in
// ceil(log2(min(threshold, n-threshold)+2))-bit groups; counts zeros instead
// of ones when threshold > n/2. Path decomposition of width twice the group
// bit count.
GadgetOutput cardinality_binary(int n, int threshold);

// Permutation-matrix test: per-row ladder exactly-one plus one seen-a-one
// memory bit per column, swept row by row. Width <= n+3 (<= 3n for n >= 2).
GadgetOutput perm_encoding(int n);

FunctionSpec eq_function(int n);            // x_i = y_i for all i, 2n <= 24
FunctionSpec triangle_free_function(int n); // C(n,2) <= 24 edge variables
FunctionSpec atmostone_function(int n);
FunctionSpec cardinality_function(int n, int threshold);
FunctionSpec perm_function(int n);

} // namespace widthforge
