#pragma once

#include "widthforge/cwexpr.hpp"
#include "widthforge/treedecomp.hpp"

namespace widthforge {

// Builds a signed k-expression for the signed incidence graph of f from a
// special tree decomposition of its primal graph. Uses at most width(t) + 3
// labels: one color per bag slot (width+1), one transient clause label, and
// one dummy label that renamings retire vertices into.
CwExpression special_td_to_scw(const CnfFormula &f, const TreeDecomposition &t);

struct ScwBound {
    int labels = 0;
    CwExpression expression;
    TreeDecomposition special_td;
};

// Constructive signed-incidence-cliquewidth upper bound: primal decomposition
// (exact under the cap, min-fill otherwise), made special, then translated.
// The returned expression is validated before returning.
ScwBound scw_width_bound(const CnfFormula &f);

} // namespace widthforge
