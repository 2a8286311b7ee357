#include <doctest.h>

#include "helpers.hpp"
#include "widthforge/compile.hpp"
#include "widthforge/gadgets.hpp"
#include "widthforge/oracle.hpp"
#include "widthforge/treewidth.hpp"

using namespace widthforge;
using testing::example1;

namespace {

// the oracle check every compilation must pass
void check_compiled(const CnfFormula &f, const TreeDecomposition &t, int width_cap) {
    StructuredDnnf d = compile_cnf(f, t);
    ModelSet ms = models(f);
    if (d.is_trivial()) {
        std::uint64_t want = d.trivial == StructuredDnnf::Trivial::const_true ? ms.set.size() : 0;
        CHECK(ms.set.count() == want);
        return;
    }
    CHECK(validate_dnnf(d) <= width_cap);
    CHECK(is_deterministic(d).ok);
    FunctionSpec table = dnnf_table(d);
    CHECK(table.onset == ms.set);
}

} // namespace

TEST_CASE("nice decompositions") {
    TreeDecomposition t = testing::example1_incidence_td();
    NiceDecomposition nice = make_nice(t);
    CHECK(nice.width() == t.width());
    CHECK(nice.nodes[size_t(nice.root)].bag.empty());
    // every variable is forgotten exactly once
    std::vector<int> forgets(10, 0);
    for (const auto &n : nice.nodes)
        if (n.kind == NiceDecomposition::Kind::forget) ++forgets[size_t(n.var)];
    for (int v = 1; v <= 9; ++v) CHECK(forgets[size_t(v)] == 1);
}

TEST_CASE("v-tree from a decomposition") {
    GadgetOutput ladder = amo_ladder(3);
    VTree vt = td_to_vtree(ladder.formula, ladder.td_witness);
    vt.validate();
    CHECK(vt.vars() == std::vector<Var>{1, 2, 3, 4, 5, 6, 7});

    // boundary property: the outside neighborhood of every internal
    // subtree fits a bag (single leaves can straddle several bags)
    Graph primal = primal_graph(ladder.formula);
    for (int u = 0; u < vt.num_nodes(); ++u) {
        if (vt.is_leaf(u)) continue;
        auto below = vt.vars_below(u);
        std::vector<char> inside(size_t(primal.n) + 1, 0);
        for (Var v : below) inside[size_t(v)] = 1;
        std::vector<int> boundary;
        for (Var v : below)
            for (int w : primal.adj[size_t(v)])
                if (!inside[size_t(w)]) boundary.push_back(w);
        std::sort(boundary.begin(), boundary.end());
        boundary.erase(std::unique(boundary.begin(), boundary.end()), boundary.end());
        bool covered = false;
        for (int b = 1; b <= ladder.td_witness.num_nodes && !covered; ++b) {
            const auto &bag = ladder.td_witness.bags[size_t(b)];
            covered = std::includes(bag.begin(), bag.end(), boundary.begin(), boundary.end());
        }
        CHECK(covered);
    }

    // single variable formula: one-leaf v-tree
    CnfFormula one(1);
    one.add_clause({1});
    TreeDecomposition t1;
    t1.add_node({1});
    VTree v1 = td_to_vtree(one, t1);
    CHECK(v1.num_nodes() == 1);
}

TEST_CASE("compiling the ladder") {
    GadgetOutput g = amo_ladder(4);
    check_compiled(g.formula, g.td_witness, 1 << (g.td_witness.width() + 1));
}

TEST_CASE("compiling example 1 with the worked decomposition") {
    check_compiled(example1(), testing::example1_primal_td(), 1 << 4);
}

TEST_CASE("unsatisfiable and degenerate inputs") {
    CnfFormula unsat(2);
    unsat.add_clause({1});
    unsat.add_clause({-1});
    unsat.add_clause({1, 2});
    TreeDecomposition t;
    t.add_node({1, 2});
    StructuredDnnf d = compile_cnf(unsat, t);
    CHECK(d.trivial == StructuredDnnf::Trivial::const_false);

    // single variable, both values satisfying: the constant-true marker
    CnfFormula taut(1);
    TreeDecomposition t1;
    t1.add_node({1});
    StructuredDnnf m = compile_cnf(taut, t1);
    CHECK(m.trivial == StructuredDnnf::Trivial::const_true);

    // single variable, one value
    CnfFormula pos(1);
    pos.add_clause({1});
    StructuredDnnf lit = compile_cnf(pos, t1);
    CHECK(!lit.is_trivial());
    CHECK(dnnf_table(lit).onset.count() == 1);
}

TEST_CASE("compiler laws on a random corpus") {
    int done = 0;
    for (std::uint64_t seed = 1; done < 40; ++seed) {
        int n = 4 + int(seed % 7);
        CnfFormula f = testing::random_cnf(seed, n, n + 4, 3);
        Graph primal = primal_graph(f);
        TreeDecomposition t = minfill_td(primal);
        if (t.width() > 5) continue;
        ++done;
        check_compiled(f, t, 1 << (t.width() + 1));
    }
}

TEST_CASE("proof tree count of a compiled deterministic circuit matches its models") {
    GadgetOutput g = amo_ladder(3);
    StructuredDnnf d = compile_cnf(g.formula, g.td_witness);
    auto cnt = count_proof_trees(d);
    CHECK(!cnt.overflow);
    CHECK(cnt.value == models(g.formula).set.count());
}

TEST_CASE("compile_widths sweeps") {
    for (int n : {3, 5, 8}) {
        GadgetOutput g = amo_ladder(n);
        CompileLog log = compile_widths(g.formula);
        CHECK(log.td_width == 2);
        CHECK(log.dnnf_width <= 8);
    }
    CompileLog k6 = compile_widths(amo_naive(6).formula);
    CHECK(k6.td_width == 5);
    CHECK(k6.dnnf_width <= 64);
}
