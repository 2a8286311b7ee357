#pragma once

#include <optional>
#include <string>
#include <vector>

#include "widthforge/treedecomp.hpp"

namespace widthforge {

// Exact treewidth with a validated witness. Subset dynamic programming over
// elimination orderings up to 20 vertices, branch and bound for 21..25.
// Graphs over 25 vertices are rejected (use minfill_td).
std::pair<int, TreeDecomposition> exact_treewidth(const Graph &g);

// Min-fill elimination heuristic; ties broken by lowest vertex id so the
// witness is deterministic. Always valid, width is an upper bound.
TreeDecomposition minfill_td(const Graph &g);

// Largest clique (exact, branch and bound); clique size - 1 lower-bounds tw.
int max_clique(const Graph &g);

// Valid decomposition of the same graph with the special (leaf-root path)
// property. Width may grow.
TreeDecomposition make_special(const Graph &g, const TreeDecomposition &t);

enum class WidthQuality { exact, upper_bound };

struct WidthMeasure {
    int value = -1;
    WidthQuality quality = WidthQuality::upper_bound;
    TreeDecomposition witness;
};

// The four treewidth-based measures of a formula: primal, dual, incidence,
// and modular (incidence after neighborhood-type contraction) treewidth.
// Each is exact when its graph fits the exact-search cap, or when the
// heuristic width meets the max-clique lower bound; otherwise tagged as an
// upper bound.
struct WidthReport {
    WidthMeasure tw_p, tw_d, tw_i, mtw;
};

WidthMeasure measure_treewidth(const Graph &g);
WidthReport width_report(const CnfFormula &f);

} // namespace widthforge
