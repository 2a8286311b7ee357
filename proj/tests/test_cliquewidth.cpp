#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "widthforge/cliquewidth.hpp"
#include "widthforge/gadgets.hpp"
#include "widthforge/treewidth.hpp"

using namespace widthforge;
using testing::example1;

TEST_CASE("expression evaluation basics") {
    CwExpression e;
    e.create(1, 1);
    e.create(2, 2);
    e.unite();
    e.join(1, 2);
    LabeledGraph g = eval_expression(e);
    CHECK(g.edge.size() == 1);
    CHECK(g.edge.count({1, 2}) == 1);

    // renaming empties label 1, so a later join adds nothing
    CwExpression f;
    f.create(1, 1);
    f.create(2, 1);
    f.unite();
    f.rename(1, 2);
    f.join(1, 2);
    CHECK(eval_expression(f).edge.empty());
}

TEST_CASE("expression evaluation errors") {
    CwExpression dup;
    dup.create(1, 1);
    dup.create(1, 2);
    dup.unite();
    CHECK_THROWS_WITH_AS(eval_expression(dup), doctest::Contains("share vertex"), Error);

    CwExpression selfjoin;
    selfjoin.create(1, 1);
    selfjoin.join(1, 1);
    CHECK_THROWS_WITH_AS(eval_expression(selfjoin), doctest::Contains("equal labels"), Error);
}

TEST_CASE("frontier-and-dead-label construction of a path") {
    Graph want(4);
    want.add_edge(1, 2);
    want.add_edge(2, 3);
    want.add_edge(3, 4);
    want.finalize();
    // frontier label 1, incoming label 2, dead label 3
    CwExpression e;
    e.create(1, 1);
    for (int v = 2; v <= 4; ++v) {
        e.create(v, 2);
        e.unite();
        e.join(1, 2);
        e.rename(1, 3);
        e.rename(2, 1);
    }
    CHECK(validate_expression(e, want) == 3);
}

TEST_CASE("validation reports a wrong edge") {
    Graph want(2);
    want.add_edge(1, 2);
    want.finalize();
    CwExpression e;
    e.create(1, 1);
    e.create(2, 2);
    e.unite();
    CHECK_THROWS_WITH_AS(validate_expression(e, want), doctest::Contains("edge {1,2}"), Error);

    CwExpression extra;
    extra.create(1, 1);
    extra.create(2, 2);
    extra.unite();
    extra.join(1, 2);
    Graph empty2(2);
    empty2.finalize();
    CHECK_THROWS_WITH_AS(validate_expression(extra, empty2), doctest::Contains("extra edge"), Error);
}

TEST_CASE("special td to signed cliquewidth on the ladder") {
    for (int n : {3, 4}) {
        GadgetOutput g = amo_ladder(n);
        TreeDecomposition t = g.td_witness;
        REQUIRE(is_special_td(primal_graph(g.formula), t));
        CwExpression e = special_td_to_scw(g.formula, t);
        int labels = validate_expression(e, signed_incidence_graph(g.formula));
        CHECK(labels <= t.width() + 3);
    }
}

TEST_CASE("special td to signed cliquewidth on a single-bag formula") {
    GadgetOutput g = amo_naive(3);
    CwExpression e = special_td_to_scw(g.formula, g.td_witness);
    int labels = validate_expression(e, signed_incidence_graph(g.formula));
    CHECK(labels <= g.td_witness.width() + 3);
}

TEST_CASE("non-special decompositions are rejected") {
    CnfFormula f = example1();
    TreeDecomposition t = testing::example1_incidence_td();
    // that decomposition is over the incidence graph, not the primal graph
    CHECK_THROWS_AS(special_td_to_scw(f, t), Error);
}

TEST_CASE("constructive scw bound") {
    // the ladder gives a constant label count at any size
    int labels10 = scw_width_bound(amo_ladder(10).formula).labels;
    int labels30 = scw_width_bound(amo_ladder(30).formula).labels;
    CHECK(labels10 <= 5);
    CHECK(labels30 <= 5);

    ScwBound ex1 = scw_width_bound(example1());
    CHECK(ex1.labels <= ex1.special_td.width() + 3);

    ScwBound empty = scw_width_bound(CnfFormula(0));
    CHECK(empty.labels == 0);
    CHECK(empty.expression.ops.empty());
}

TEST_CASE("cwx round trip") {
    GadgetOutput g = amo_ladder(3);
    CwExpression e = special_td_to_scw(g.formula, g.td_witness);
    std::ostringstream out;
    write_cwx(e, out);
    std::istringstream in(out.str());
    CwExpression back = parse_cwx(in);
    std::ostringstream out2;
    write_cwx(back, out2);
    CHECK(out.str() == out2.str());
    CHECK(validate_expression(back, signed_incidence_graph(g.formula)) == e.labels_used());
}
