#include <doctest.h>

#include "helpers.hpp"
#include "widthforge/gadgets.hpp"
#include "widthforge/oracle.hpp"
#include "widthforge/reencode.hpp"
#include "widthforge/treewidth.hpp"

using namespace widthforge;
using testing::example1;

namespace {

void check_dnnf_to_cnf_laws(const StructuredDnnf &d, const EncodingResult &enc) {
    int n = d.num_vars();
    int kl = std::max(2, dnnf_width(d)); // the index laws degenerate at width 1
    int lg = ceil_log2(std::uint64_t(kl));
    CHECK(enc.formula.num_aux() <= n * (3 * lg + 1));
    CHECK(enc.formula.clauses.size() <=
          size_t(3) * size_t(n) * size_t(kl) * size_t(kl) * size_t(kl) + 4 * size_t(n));
    REQUIRE(enc.td_witness);
    Graph primal = primal_graph(enc.formula);
    int w = validate_td(primal, *enc.td_witness);
    CHECK(w <= 9 * lg + 1);
    REQUIRE(enc.special_witness);
    CHECK(is_special_td(primal, *enc.special_witness));
}

} // namespace

TEST_CASE("dnnf_to_cnf on a compiled ladder") {
    GadgetOutput g = amo_ladder(4);
    StructuredDnnf d = with_verified_determinism(compile_cnf(g.formula, g.td_witness));
    EncodingResult enc = dnnf_to_cnf(d);
    check_dnnf_to_cnf_laws(d, enc);
    CHECK(enc.dependent);

    // the encoding's projection is the circuit's function (here: the full
    // model set of the ladder over x and y variables)
    FunctionSpec table = dnnf_table(d);
    CHECK(verify_encoding(enc, table, true) == "");

    // cross-check the block DP against the brute-force oracle
    if (enc.formula.num_vars <= kBruteForceVarCap) {
        auto bp = project_via_blocks(enc.formula, enc.blocks);
        CHECK(bp.projection.onset == project_models(enc.formula).onset);
        CHECK(bp.unique_extension == has_dependent_aux(enc.formula).ok);
    }
}

TEST_CASE("dnnf_to_cnf on width-1 circuits degenerates to unit checks") {
    CnfFormula f(3); // x1 and not x2 and x3: a single model
    f.add_clause({1});
    f.add_clause({-2});
    f.add_clause({3});
    TreeDecomposition t;
    t.add_node({1, 2, 3});
    StructuredDnnf d = with_verified_determinism(compile_cnf(f, t));
    CHECK(dnnf_width(d) == 1);
    EncodingResult enc = dnnf_to_cnf(d);
    check_dnnf_to_cnf_laws(d, enc);
    CHECK(enc.formula.num_vars == 3); // no guess bits at width 1
    CHECK(verify_encoding(enc, dnnf_table(d), true) == "");
}

TEST_CASE("dnnf_to_cnf on the figure-sized circuit") {
    CnfFormula f = example1();
    StructuredDnnf d =
        with_verified_determinism(compile_cnf(f, testing::example1_primal_td()));
    EncodingResult enc = dnnf_to_cnf(d);
    check_dnnf_to_cnf_laws(d, enc);
    CHECK(verify_encoding(enc, dnnf_table(d), true) == "");
}

TEST_CASE("dnnf_to_cnf handles markers and literals") {
    StructuredDnnf t = StructuredDnnf::make_trivial(StructuredDnnf::Trivial::const_true, {1, 2});
    EncodingResult enc = dnnf_to_cnf(t);
    CHECK(enc.formula.clauses.empty());
    CHECK(project_models(enc.formula).onset.count() == 4);

    StructuredDnnf fmarker = StructuredDnnf::make_trivial(StructuredDnnf::Trivial::const_false, {1});
    EncodingResult fenc = dnnf_to_cnf(fmarker);
    CHECK(project_models(fenc.formula).onset.count() == 0);
}

TEST_CASE("dnnf_to_scw emits a validating signed expression") {
    GadgetOutput g = amo_ladder(4);
    StructuredDnnf d = with_verified_determinism(compile_cnf(g.formula, g.td_witness));
    EncodingResult enc = dnnf_to_scw(d);
    REQUIRE(enc.scw_witness);
    int labels = validate_expression(*enc.scw_witness, signed_incidence_graph(enc.formula));
    CHECK(labels <= enc.special_witness->width() + 3);
}

TEST_CASE("cliquegood on the ladder with blocks checked against the oracle") {
    GadgetOutput g = amo_ladder(4);
    EncodingResult enc = cliquegood(g.formula, g.td_witness);
    // semantic check: projection equals the ladder's own projection
    FunctionSpec want = project_models(g.formula);
    CHECK(verify_encoding(enc, want, true) == "");
    if (enc.formula.num_vars <= kBruteForceVarCap) {
        CHECK(is_clausal_encoding(enc.formula, want).ok);
        CHECK(has_dependent_aux(enc.formula).ok);
    }
}

TEST_CASE("cliquegood witnesses validate with the documented constants") {
    CnfFormula f = example1();
    TreeDecomposition t = testing::example1_primal_td();
    EncodingResult enc = cliquegood(f, t);
    int k = enc.source_width;

    REQUIRE(enc.mtw_witness);
    Contraction con = module_contraction(incidence_graph(enc.formula));
    int mw = validate_td(con.graph, *enc.mtw_witness);
    CHECK(mw <= 6 * (k + 1) - 1);

    REQUIRE(enc.cw_witness);
    int labels = validate_expression(*enc.cw_witness, incidence_graph(enc.formula));
    CHECK(labels <= 13 * (k + 1) + 2);

    CHECK(verify_encoding(enc, project_models(f), true) == "");
}

TEST_CASE("cliquegood on the grid formula") {
    // the 3x3 grid instance: (x_{i,j} or x_{i+1,j}) and (x_{i,j} or x_{i,j+1})
    CnfFormula f(9);
    auto id = [](int i, int j) { return (i - 1) * 3 + j; };
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j) {
            if (i < 3) f.add_clause({id(i, j), id(i + 1, j)});
            if (j < 3) f.add_clause({id(i, j), id(i, j + 1)});
        }
    auto [w, t] = exact_treewidth(primal_graph(f));
    EncodingResult enc = cliquegood(f, t);
    CHECK(verify_encoding(enc, project_models(f), true) == "");
    Contraction con = module_contraction(incidence_graph(enc.formula));
    CHECK(validate_td(con.graph, *enc.mtw_witness) <= 6 * (enc.source_width + 1) - 1);
    CHECK(validate_expression(*enc.cw_witness, incidence_graph(enc.formula)) <=
          13 * (enc.source_width + 1) + 2);
}

TEST_CASE("pipeline_reverse round-trips the ladder") {
    GadgetOutput g = amo_ladder(5);
    EncodingResult enc = pipeline_reverse(g.formula, g.td_witness);
    CHECK(enc.dependent);
    CHECK(verify_encoding(enc, atmostone_function(5), true) == "");
}

TEST_CASE("pipeline_reverse without aux equals plain reencoding") {
    GadgetOutput g = amo_naive(4);
    EncodingResult enc = pipeline_reverse(g.formula, g.td_witness);
    CHECK(verify_encoding(enc, atmostone_function(4), true) == "");
}

TEST_CASE("pipeline_reverse refuses the dependent path on free aux vars") {
    CnfFormula f(2);
    f.mark_aux(2);
    f.add_clause({1, 2});
    TreeDecomposition t;
    t.add_node({1, 2});
    CHECK_THROWS_WITH_AS(pipeline_reverse(f, t, DependentMode::require),
                         doctest::Contains("free auxiliary"), Error);
    // the automatic mode falls back to plain forgetting
    EncodingResult enc = pipeline_reverse(f, t);
    Bitset both(2, true);
    FunctionSpec want({1}, both);
    CHECK(verify_encoding(enc, want, false) == "");
}

TEST_CASE("block verification catches a broken encoding") {
    GadgetOutput g = amo_ladder(4);
    StructuredDnnf d = with_verified_determinism(compile_cnf(g.formula, g.td_witness));
    EncodingResult enc = dnnf_to_cnf(d);
    REQUIRE(!enc.formula.clauses.empty());
    EncodingResult broken = enc;
    broken.formula.clauses.pop_back(); // drop one clause: projection grows somewhere
    FunctionSpec table = dnnf_table(d);
    std::string err = verify_encoding(broken, table, false);
    // dropping a clause may or may not change the projection, but dropping
    // all of one leaf's checks must; delete aggressively until it reports
    while (err.empty() && !broken.formula.clauses.empty()) {
        broken.formula.clauses.pop_back();
        err = verify_encoding(broken, table, false);
    }
    CHECK(!err.empty());
}
