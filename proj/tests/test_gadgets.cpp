#include <doctest.h>

#include "helpers.hpp"
#include "widthforge/block_projection.hpp"
#include "widthforge/compile.hpp"
#include "widthforge/gadgets.hpp"
#include "widthforge/oracle.hpp"
#include "widthforge/treewidth.hpp"

using namespace widthforge;

TEST_CASE("naive amo") {
    GadgetOutput g = amo_naive(5);
    CHECK(g.formula.clauses.size() == 10);
    CHECK(exact_treewidth(primal_graph(g.formula)).first == 4);
    REQUIRE(g.spec);
    CHECK(is_clausal_encoding(g.formula, *g.spec).ok);
    CHECK(amo_naive(1).formula.clauses.empty());
    CHECK(project_models(amo_naive(4).formula).onset.count() == 5);
}

TEST_CASE("ladder amo") {
    for (int n : {1, 2, 5}) {
        GadgetOutput g = amo_ladder(n);
        CHECK(validate_td(primal_graph(g.formula), g.td_witness) <= 2);
        REQUIRE(g.spec);
        CHECK(is_clausal_encoding(g.formula, *g.spec).ok);
        CHECK(has_dependent_aux(g.formula).ok);
    }
    // structural witness keeps width 2 at larger sizes
    GadgetOutput big = amo_ladder(50);
    CHECK(validate_td(primal_graph(big.formula), big.td_witness) == 2);
    CHECK(minfill_td(primal_graph(big.formula)).width() == 2);
}

TEST_CASE("ladder blocks agree with the oracle") {
    GadgetOutput g = amo_ladder(5);
    auto bp = project_via_blocks(g.formula, g.blocks);
    CHECK(bp.projection.onset == g.spec->onset);
    CHECK(bp.unique_extension);
}

TEST_CASE("cardinality encoding small cases") {
    GadgetOutput g = cardinality_binary(4, 2);
    REQUIRE(g.spec);
    CHECK(g.spec->onset.count() == 11);
    CHECK(is_clausal_encoding(g.formula, *g.spec).ok);
    CHECK(has_dependent_aux(g.formula).ok);
    int b = 2; // ceil(log2(2+2))
    CHECK(validate_td(primal_graph(g.formula), g.td_witness) <= 2 * b + 1);

    GadgetOutput amo8 = cardinality_binary(8, 1);
    CHECK(is_clausal_encoding(amo8.formula, *amo8.spec).ok);
    CHECK(amo8.spec->onset.count() == 9);
}

TEST_CASE("cardinality zero-counting branch") {
    GadgetOutput g = cardinality_binary(10, 8); // counts zeros, blocks only
    auto bp = project_via_blocks(g.formula, g.blocks);
    std::uint64_t want = 0;
    for (std::uint64_t r = 0; r < 1024; ++r)
        if (__builtin_popcountll(r) <= 8) ++want;
    CHECK(bp.projection.onset.count() == want);
    CHECK(bp.unique_extension);
    int b = 2; // ceil(log2(min(8,2)+2))
    CHECK(validate_td(primal_graph(g.formula), g.td_witness) <= 2 * b + 1);
}

TEST_CASE("cardinality edge thresholds") {
    GadgetOutput top = cardinality_binary(4, 4);
    CHECK(top.formula.clauses.empty());
    CHECK(top.spec->onset.count() == 16);

    GadgetOutput zero = cardinality_binary(4, 0);
    CHECK(is_clausal_encoding(zero.formula, *zero.spec).ok);
    CHECK(zero.spec->onset.count() == 1);

    GadgetOutput one = cardinality_binary(1, 0);
    CHECK(is_clausal_encoding(one.formula, *one.spec).ok);
}

TEST_CASE("cardinality blocks match the oracle when both are available") {
    for (auto [n, k] : std::vector<std::pair<int, int>>{{4, 2}, {6, 1}, {6, 3}, {5, 4}}) {
        GadgetOutput g = cardinality_binary(n, k);
        if (g.formula.num_vars > kBruteForceVarCap || g.blocks.empty()) continue;
        auto bp = project_via_blocks(g.formula, g.blocks);
        CHECK(bp.projection.onset == project_models(g.formula).onset);
        CHECK(bp.unique_extension == has_dependent_aux(g.formula).ok);
    }
}

TEST_CASE("perm encoding") {
    GadgetOutput p2 = perm_encoding(2);
    REQUIRE(p2.spec);
    CHECK(p2.spec->onset.count() == 2);
    CHECK(is_clausal_encoding(p2.formula, *p2.spec).ok);
    CHECK(has_dependent_aux(p2.formula).ok);
    CHECK(validate_td(primal_graph(p2.formula), p2.td_witness) <= 3 * 2);

    GadgetOutput p3 = perm_encoding(3);
    CHECK(p3.formula.num_vars == 24);
    CHECK(is_clausal_encoding(p3.formula, *p3.spec).ok);
    CHECK(p3.spec->onset.count() == 6);
    CHECK(validate_td(primal_graph(p3.formula), p3.td_witness) <= 3 * 3);

    GadgetOutput p1 = perm_encoding(1);
    CHECK(project_models(p1.formula).onset.count() == 1);
}

TEST_CASE("perm projection via the compiler at n = 4") {
    GadgetOutput p4 = perm_encoding(4);
    CHECK(!p4.spec); // 44 variables, beyond the table cap
    CHECK(validate_td(primal_graph(p4.formula), p4.td_witness) <= 3 * 4);
    StructuredDnnf d = compile_cnf(p4.formula, p4.td_witness);
    for (Var z : p4.formula.aux_vars()) d = forget(d, z);
    FunctionSpec table = dnnf_table(d);
    CHECK(table.onset.count() == 24);
    CHECK(table.onset == perm_function(4).onset);
}

TEST_CASE("eq and triangle-freeness tables") {
    FunctionSpec eq2 = eq_function(2);
    CHECK(eq2.onset.count() == 4);
    FunctionSpec t3 = triangle_free_function(3);
    CHECK(t3.onset.count() == 7);
    // n = 4: count graphs with no triangle among the four triples
    FunctionSpec t4 = triangle_free_function(4);
    std::uint64_t brute = 0;
    for (std::uint64_t r = 0; r < 64; ++r) {
        // edges in lex order: 12 13 14 23 24 34 (bit 5 = first)
        auto bit = [&](int i) { return (r >> (5 - i)) & 1; };
        bool t123 = bit(0) && bit(3) && bit(1);
        bool t124 = bit(0) && bit(4) && bit(2);
        bool t134 = bit(1) && bit(5) && bit(2);
        bool t234 = bit(3) && bit(5) && bit(4);
        if (!t123 && !t124 && !t134 && !t234) ++brute;
    }
    CHECK(t4.onset.count() == brute);
    CHECK_THROWS_AS(triangle_free_function(8), Error);
}

TEST_CASE("gadget width witnesses validate across sizes") {
    for (int n = 1; n <= 50; n += 7) {
        GadgetOutput g = amo_ladder(n);
        CHECK(validate_td(primal_graph(g.formula), g.td_witness) <= 2);
    }
    for (int n = 2; n <= 20; n += 3)
        for (int k : {0, 1, n / 2, n - 1}) {
            GadgetOutput g = cardinality_binary(n, k);
            int b = std::max(1, ceil_log2(std::uint64_t(std::min(k, n - k)) + 2));
            CHECK(validate_td(primal_graph(g.formula), g.td_witness) <= 2 * b + 1);
        }
}
