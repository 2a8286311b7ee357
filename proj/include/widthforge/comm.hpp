#pragma once

#include <optional>

#include "widthforge/dnnf.hpp"
#include "widthforge/function_spec.hpp"

namespace widthforge {

struct Partition {
    std::vector<Var> y, z; // disjoint, union = spec vars, each ascending

    static Partition of(const FunctionSpec &spec, std::vector<Var> y_side);
    bool balanced_third(int total) const {
        return 3 * int(std::min(y.size(), z.size())) >= total;
    }
};

// A combinatorial rectangle as a (row set, column set) pair of the
// communication matrix: rows indexed by Y-assignments, columns by
// Z-assignments (ascending id, first variable most significant).
struct Rectangle {
    Bitset rows, cols;
};

struct CoverResult {
    bool empty_onset = false;       // s_min = 0 by convention, cc undefined
    std::uint64_t s_min = 0;
    double cc = 0.0;                // log2(s_min)
    std::vector<Rectangle> cover;   // a minimum cover witnessing s_min
};

// Exact minimum rectangle cover size (cc(f, Pi) = log2 of it). Enumerates the
// maximal all-ones rectangles (intersection closure of the row supports) and
// solves the set cover exactly by branch and bound.
CoverResult min_rectangle_cover(const FunctionSpec &spec, const Partition &pi);

struct BestCc {
    bool empty_onset = false;
    std::uint64_t s_min = 0;
    double cc = 0.0;
    Partition argmin;
};

// Minimum of cc(f, Pi) over all 1/3-balanced partitions, deduplicated by the
// (Y,Z) ~ (Z,Y) symmetry; ties resolved toward the lexicographically
// smallest Y.
BestCc cc_best_third(const FunctionSpec &spec);

// Raw communication lower bound for all width measures: ceil(cc_best^{1/3}).
int width_lower_bound(const FunctionSpec &spec);

struct CutReport {
    int vtree_node = 0;
    int gate_bound = 0;          // or-gates at the node (input gates at leaves)
    std::uint64_t s_min = 0;
    bool ok = false;             // gate_bound >= s_min
};

// Audits every v-tree cut of a compiled circuit: the rectangle cover induced
// by the or-gates at a node can never beat the exact minimum cover.
std::vector<CutReport> cut_cc_audit(const StructuredDnnf &d, const FunctionSpec &spec);

struct FoolingResult {
    bool ok = false;
    int bound = 0;                              // |candidates| when ok
    std::optional<std::pair<int, int>> failing; // indices of a bad pair
};

// Checks that the candidate models are pairwise incompatible: for each pair,
// at least one of the two mixed assignments falsifies the function. A passing
// family of size s certifies s_min >= s.
FoolingResult fooling_set_bound(const FunctionSpec &spec, const Partition &pi,
                                const std::vector<Assignment> &candidates);

} // namespace widthforge
