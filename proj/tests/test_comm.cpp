#include <doctest.h>

#include "helpers.hpp"
#include "widthforge/comm.hpp"
#include "widthforge/compile.hpp"
#include "widthforge/gadgets.hpp"
#include "widthforge/oracle.hpp"

using namespace widthforge;

namespace {

bool cover_is_valid(const FunctionSpec &spec, const Partition &pi, const CoverResult &res) {
    // every rectangle is inside the onset and the union covers it exactly
    int my = int(pi.y.size()), mz = int(pi.z.size());
    Bitset covered(spec.num_rows());
    for (const Rectangle &r : res.cover)
        for (std::uint64_t ra = 0; ra < (std::uint64_t(1) << my); ++ra) {
            if (!r.rows.get(ra)) continue;
            for (std::uint64_t ca = 0; ca < (std::uint64_t(1) << mz); ++ca) {
                if (!r.cols.get(ca)) continue;
                Assignment a(spec.vars.back());
                for (int j = 0; j < my; ++j) a.set(pi.y[size_t(j)], (ra >> (my - 1 - j)) & 1);
                for (int j = 0; j < mz; ++j) a.set(pi.z[size_t(j)], (ca >> (mz - 1 - j)) & 1);
                std::uint64_t row = spec.row_of(a);
                if (!spec.onset.get(row)) return false;
                covered.set(row);
            }
        }
    return covered == spec.onset;
}

} // namespace

TEST_CASE("EQ under the variable-block partition") {
    for (int n : {2, 3}) {
        FunctionSpec eq = eq_function(n);
        std::vector<Var> ys;
        for (int i = 1; i <= n; ++i) ys.push_back(i);
        Partition pi = Partition::of(eq, ys);
        CoverResult r = min_rectangle_cover(eq, pi);
        CHECK(r.s_min == (std::uint64_t(1) << n));
        CHECK(cover_is_valid(eq, pi, r));
    }
}

TEST_CASE("EQ under the interleaved partition has a one-rectangle cover") {
    FunctionSpec eq = eq_function(4);
    // pairs (x_i, y_i) for i <= 2 on one side
    Partition pi = Partition::of(eq, {1, 2, 5, 6});
    CoverResult r = min_rectangle_cover(eq, pi);
    CHECK(r.s_min == 1);
    CHECK(r.cc == doctest::Approx(0.0));
}

TEST_CASE("best-case balanced cc of EQ is zero") {
    for (int n : {2, 3}) {
        BestCc b = cc_best_third(eq_function(n));
        CHECK(b.s_min == 1);
        CHECK(b.cc == doctest::Approx(0.0));
    }
}

TEST_CASE("the three-model DNF example") {
    // f = (!x and !y and z) or (x and y and z) or (x and !y and !z)
    Bitset onset(8);
    onset.set(0b001);
    onset.set(0b111);
    onset.set(0b100);
    FunctionSpec f({1, 2, 3}, onset);
    Partition pi = Partition::of(f, {1, 2});
    CoverResult r = min_rectangle_cover(f, pi);
    CHECK(r.s_min == 2);
    CHECK(cover_is_valid(f, pi, r));
}

TEST_CASE("empty onset reports the convention marker") {
    Bitset onset(4);
    FunctionSpec f({1, 2}, onset);
    CoverResult r = min_rectangle_cover(f, Partition::of(f, {1}));
    CHECK(r.empty_onset);
    CHECK(r.s_min == 0);
    CHECK(width_lower_bound(f) == 0);
}

TEST_CASE("constant-true function has a single-rectangle cover") {
    Bitset onset(16, true);
    FunctionSpec f({1, 2, 3, 4}, onset);
    CHECK(cc_best_third(f).s_min == 1);
    CHECK(width_lower_bound(f) == 0);
}

TEST_CASE("cc_best of the small at-most-one function") {
    BestCc b = cc_best_third(atmostone_function(6));
    // two one-sided rectangles (side picks the single 1, or both sides empty)
    CHECK(b.s_min >= 2);
    CHECK(b.s_min <= 3);
}

TEST_CASE("cardinality fooling family") {
    for (auto [n, k] : std::vector<std::pair<int, int>>{{9, 3}, {12, 2}}) {
        FunctionSpec spec = cardinality_function(n, k);
        std::vector<Var> ys;
        for (int i = 1; i <= n / 2; ++i) ys.push_back(i);
        Partition pi = Partition::of(spec, ys);
        int s = std::min(k, n / 3);
        std::vector<Assignment> family;
        for (int i = 0; i <= s; ++i) {
            Assignment a(n);
            for (int j = 0; j < i; ++j) a.set(pi.y[size_t(j)], 1);
            for (int j = 0; j < k - i; ++j) a.set(pi.z[size_t(j)], 1);
            family.push_back(a);
        }
        FoolingResult fr = fooling_set_bound(spec, pi, family);
        CHECK(fr.ok);
        CHECK(fr.bound == s + 1);
        CoverResult exact = min_rectangle_cover(spec, pi);
        CHECK(exact.s_min >= std::uint64_t(s + 1));
        CHECK(exact.s_min == std::uint64_t(k + 1)); // the nested covers are tight here
    }
}

TEST_CASE("a fooling family with a compatible pair is rejected") {
    FunctionSpec all = cardinality_function(4, 4);
    Partition pi = Partition::of(all, {1, 2});
    Assignment a(4), b(4);
    b.set(1, 1);
    FoolingResult fr = fooling_set_bound(all, pi, {a, b});
    CHECK(!fr.ok);
    REQUIRE(fr.failing);

    Assignment off(4);
    off.set(1, 1);
    off.set(2, 1);
    FunctionSpec amo = atmostone_function(4);
    CHECK_THROWS_AS(fooling_set_bound(amo, pi, {off}), Error);
}

TEST_CASE("fooling bound never beats the exact cover") {
    FunctionSpec spec = cardinality_function(6, 2);
    Partition pi = Partition::of(spec, {1, 2, 3});
    std::vector<Assignment> family;
    for (int i = 0; i <= 2; ++i) {
        Assignment a(6);
        for (int j = 0; j < i; ++j) a.set(j + 1, 1);
        for (int j = 0; j < 2 - i; ++j) a.set(4 + j, 1);
        family.push_back(a);
    }
    FoolingResult fr = fooling_set_bound(spec, pi, family);
    REQUIRE(fr.ok);
    CHECK(std::uint64_t(fr.bound) <= min_rectangle_cover(spec, pi).s_min);
}

TEST_CASE("cover minimum is invariant under variable renaming") {
    FunctionSpec amo = atmostone_function(4);
    Partition pi = Partition::of(amo, {1, 2});
    std::uint64_t base = min_rectangle_cover(amo, pi).s_min;
    // swapping the roles of the two sides gives the same count (symmetry)
    Partition swapped = Partition::of(amo, {3, 4});
    CHECK(min_rectangle_cover(amo, swapped).s_min == base);
}

TEST_CASE("cut audit passes on compiled circuits") {
    GadgetOutput g = amo_ladder(5);
    StructuredDnnf d = compile_cnf(g.formula, g.td_witness);
    FunctionSpec table = dnnf_table(d);
    auto reports = cut_cc_audit(d, table);
    CHECK(!reports.empty());
    for (const auto &rep : reports) CHECK(rep.ok);

    // the width-law side: max s_min over cuts stays at or below the width
    std::uint64_t smax = 0;
    for (const auto &rep : reports)
        if (!d.vtree.is_leaf(rep.vtree_node)) smax = std::max(smax, rep.s_min);
    CHECK(smax <= std::uint64_t(std::max(1, dnnf_width(d))));
}

TEST_CASE("cut audit on the cardinality circuit") {
    GadgetOutput g = cardinality_binary(5, 1); // 15 vars fits the cover cap
    StructuredDnnf d = compile_cnf(g.formula, g.td_witness);
    FunctionSpec table = dnnf_table(d);
    for (const auto &rep : cut_cc_audit(d, table)) CHECK(rep.ok);
}

TEST_CASE("single literal circuit audit") {
    CnfFormula f(1);
    f.add_clause({1});
    TreeDecomposition t;
    t.add_node({1});
    StructuredDnnf d = compile_cnf(f, t);
    auto reports = cut_cc_audit(d, dnnf_table(d));
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].s_min <= 1);
    CHECK(reports[0].ok);
}
