#include "widthforge/cliquewidth.hpp"

#include <algorithm>

#include "widthforge/treewidth.hpp"

namespace widthforge {

namespace {

struct ScwBuilder {
    const CnfFormula &f;
    const TreeDecomposition &t;
    std::vector<std::vector<int>> children;
    std::vector<int> parent;
    std::vector<int> color;                    // variable -> color in 1..width+1
    std::vector<std::vector<int>> clauses_at;  // node -> clause indices (lambda)
    int clause_label, dummy_label;
    CwExpression expr;

    ScwBuilder(const CnfFormula &f_, const TreeDecomposition &t_) : f(f_), t(t_) {
        children = t.children_of(1);
        parent = t.parent_of(1);
        int maxbag = t.width() + 1;
        clause_label = maxbag + 1;
        dummy_label = maxbag + 2;
        assign_colors(maxbag);
        assign_clauses();
    }

    // Descend from the root; a variable gets its color at its topmost bag and
    // keeps it along its (unique, by specialness) occurrence path.
    void assign_colors(int maxbag) {
        color.assign(size_t(f.num_vars) + 1, 0);
        std::vector<int> order{1};
        for (size_t i = 0; i < order.size(); ++i)
            for (int c : children[size_t(order[i])]) order.push_back(c);
        for (int node : order) {
            std::vector<char> used(size_t(maxbag) + 2, 0);
            for (int v : t.bags[size_t(node)])
                if (color[size_t(v)]) used[size_t(color[size_t(v)])] = 1;
            for (int v : t.bags[size_t(node)]) {
                if (color[size_t(v)]) continue;
                int c = 1;
                while (used[size_t(c)]) ++c;
                color[size_t(v)] = c;
                used[size_t(c)] = 1;
            }
        }
    }

    void assign_clauses() {
        clauses_at.assign(size_t(t.num_nodes) + 1, {});
        for (size_t ci = 0; ci < f.clauses.size(); ++ci) {
            const Clause &c = f.clauses[ci];
            int home = 0;
            for (int node = 1; node <= t.num_nodes && !home; ++node) {
                bool inside = true;
                const auto &bag = t.bags[size_t(node)];
                for (Lit l : c.lits)
                    inside = inside && std::binary_search(bag.begin(), bag.end(), lit_var(l));
                if (inside) home = node;
            }
            if (!home)
                fail(ErrorKind::invalid, "clause " + std::to_string(ci + 1) +
                                             " is not covered by any bag of the decomposition");
            clauses_at[size_t(home)].push_back(int(ci));
        }
    }

    // Emits the expression for the subtree under `node`; afterwards exactly
    // the variables of this bag still carry their color label, everything
    // else is dummied out.
    void build(int node, bool &have_graph) {
        bool have_sub = false;
        for (int c : children[size_t(node)]) {
            bool have_child = false;
            build(c, have_child);
            // retire variables that do not survive into this bag
            const auto &bag = t.bags[size_t(node)];
            for (int v : t.bags[size_t(c)])
                if (!std::binary_search(bag.begin(), bag.end(), v))
                    expr.rename(color[size_t(v)], dummy_label);
            if (have_sub && have_child) expr.unite();
            have_sub = have_sub || have_child;
        }
        // create the variables whose lowest occurrence is this bag
        for (int v : t.bags[size_t(node)]) {
            bool in_child = false;
            for (int c : children[size_t(node)]) {
                const auto &cb = t.bags[size_t(c)];
                in_child = in_child || std::binary_search(cb.begin(), cb.end(), v);
            }
            if (in_child) continue;
            expr.create(v, color[size_t(v)]);
            if (have_sub) expr.unite();
            have_sub = true;
        }
        // one clause at a time through the transient clause label; processing
        // several clauses at one node is the flattened form of the
        // bag-duplication step that makes the clause-to-bag map injective
        for (int ci : clauses_at[size_t(node)]) {
            int cv = f.num_vars + ci + 1; // incidence-graph clause vertex id
            expr.create(cv, clause_label);
            if (have_sub) expr.unite();
            have_sub = true;
            for (Lit l : f.clauses[size_t(ci)].lits)
                expr.join(color[size_t(lit_var(l))], clause_label, lit_positive(l) ? '+' : '-');
            expr.rename(clause_label, dummy_label);
        }
        have_graph = have_sub;
    }
};

} // namespace

CwExpression special_td_to_scw(const CnfFormula &f, const TreeDecomposition &t) {
    for (size_t i = 0; i < f.clauses.size(); ++i)
        if (f.clauses[i].tautological)
            fail(ErrorKind::invalid, "clause " + std::to_string(i + 1) +
                                         " is tautological; the signed incidence graph is undefined");
    Graph primal = primal_graph(f);
    std::string why;
    if (!is_special_td(primal, t, &why))
        fail(ErrorKind::invalid, "decomposition is not special: " + why);
    ScwBuilder builder(f, t);
    bool have = false;
    builder.build(1, have);
    return builder.expr;
}

ScwBound scw_width_bound(const CnfFormula &f) {
    ScwBound out;
    if (f.num_vars == 0 && f.clauses.empty()) {
        out.special_td.add_node({});
        out.special_td.special = true;
        return out; // empty formula: zero-label degenerate expression
    }
    Graph primal = primal_graph(f);
    TreeDecomposition td =
        primal.n <= kExactTreewidthCap ? exact_treewidth(primal).second : minfill_td(primal);
    out.special_td = make_special(primal, td);
    out.expression = special_td_to_scw(f, out.special_td);
    out.labels = validate_expression(out.expression, signed_incidence_graph(f));
    return out;
}

} // namespace widthforge
