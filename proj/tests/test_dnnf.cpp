#include <doctest.h>

#include <set>
#include <sstream>

#include "helpers.hpp"
#include "widthforge/dnnf.hpp"

using namespace widthforge;

namespace {

// The worked three-variable circuit: v-tree a = (x, b), b = (y, z);
// output = (x and ((y and z) or (!y and !z))) or (!x and (!y and !z)).
// mu(b) holds two or-gates as drawn; see the width checks below.
struct Figure {
    StructuredDnnf d;
    int vx, vy, vz, vb, va;
    int b1, b2; // the or-gates at b

    Figure() {
        vx = d.vtree.add_leaf(1);
        vy = d.vtree.add_leaf(2);
        vz = d.vtree.add_leaf(3);
        vb = d.vtree.add_internal(vy, vz);
        va = d.vtree.add_internal(vx, vb);
        d.vtree.root = va;
        auto lit = [&](Lit l, int vn) {
            d.gates.push_back({GateKind::literal, l, {}, vn});
            return int(d.gates.size()) - 1;
        };
        auto gand = [&](int a, int b, int vn) {
            d.gates.push_back({GateKind::and_gate, 0, {a, b}, vn});
            return int(d.gates.size()) - 1;
        };
        auto gor = [&](std::vector<int> ins, int vn) {
            d.gates.push_back({GateKind::or_gate, 0, std::move(ins), vn});
            return int(d.gates.size()) - 1;
        };
        int x = lit(1, vx), nx = lit(-1, vx);
        int y = lit(2, vy), ny = lit(-2, vy);
        int z = lit(3, vz), nz = lit(-3, vz);
        int b3 = gand(y, z, vb);
        int b4 = gand(ny, nz, vb);
        int b5 = gand(ny, nz, vb);
        b1 = gor({b3, b4}, vb);
        b2 = gor({b5}, vb);
        int a2 = gand(x, b1, va);
        int a3 = gand(nx, b2, va);
        d.output = gor({a2, a3}, va);
    }
};

} // namespace

TEST_CASE("figure circuit validates; width counts or-gates per node") {
    Figure fig;
    CHECK(validate_dnnf(fig.d) == 2); // two or-gates at node b as drawn
    // a third or-gate at b lifts the width to 3
    StructuredDnnf d3 = fig.d;
    int extra_and = int(d3.gates.size());
    d3.gates.push_back({GateKind::and_gate, 0, {d3.gates[6].inputs[0], d3.gates[6].inputs[1]}, fig.vb});
    d3.gates.push_back({GateKind::or_gate, 0, {extra_and}, fig.vb});
    CHECK(validate_dnnf(d3) == 3);
}

TEST_CASE("structural violations are caught") {
    Figure fig;
    StructuredDnnf bad = fig.d;
    // and-gate with both inputs under the same child
    bad.gates.push_back({GateKind::and_gate, 0, {0, 1}, fig.va}); // x and !x both at leaf x
    CHECK_THROWS_WITH_AS(validate_dnnf(bad), doctest::Contains("child nodes"), Error);

    StructuredDnnf lit_mismatch = fig.d;
    lit_mismatch.gates[0].lit = 2;
    CHECK_THROWS_AS(validate_dnnf(lit_mismatch), Error);

    StructuredDnnf empty_or = fig.d;
    empty_or.gates[9].inputs.clear();
    CHECK_THROWS_WITH_AS(validate_dnnf(empty_or), doctest::Contains("constant"), Error);
}

TEST_CASE("evaluation of the figure circuit") {
    Figure fig;
    Assignment a(3);
    a.set(1, 1);
    a.set(2, 1);
    a.set(3, 1);
    CHECK(evaluate(fig.d, a)); // x=y=z=1 goes through b3
    Assignment b(3);
    CHECK(evaluate(fig.d, b)); // all-zero through b5
    Assignment c(3);
    c.set(2, 1);
    CHECK(!evaluate(fig.d, c)); // y=1 alone satisfies nothing
    CHECK(dnnf_table(fig.d).onset.count() == 3);
}

TEST_CASE("figure circuit is deterministic and has three proof trees") {
    Figure fig;
    CHECK(is_deterministic(fig.d).ok);
    auto cnt = count_proof_trees(fig.d);
    CHECK(!cnt.overflow);
    CHECK(cnt.value == 3);

    int seen = 0;
    for_each_proof_tree(fig.d, [&](const std::vector<int> &) {
        ++seen;
        return true;
    });
    CHECK(seen == 3);
}

TEST_CASE("a nondeterministic or-gate is found with a witness") {
    Figure fig;
    StructuredDnnf d = fig.d;
    // make b2's branch overlap b1's: or over (y z) and (!y !z) plus another (!y !z)
    d.gates[9].inputs = {6, 7, 8}; // b1 takes b3, b4, b5: b4 and b5 coincide
    auto chk = is_deterministic(d);
    CHECK(!chk.ok);
    CHECK(chk.gate == 9);
    REQUIRE(chk.assignment);
    CHECK(!(*chk.assignment)[2]);
    CHECK(!(*chk.assignment)[3]);
}

TEST_CASE("models match satisfied proof trees exhaustively") {
    Figure fig;
    // every assignment satisfies the circuit iff it satisfies some proof tree
    for (std::uint64_t r = 0; r < 8; ++r) {
        Assignment a(3);
        for (int v = 1; v <= 3; ++v) a.set(v, (r >> (3 - v)) & 1);
        bool val = evaluate(fig.d, a);
        int sat_trees = 0;
        for_each_proof_tree(fig.d, [&](const std::vector<int> &gates) {
            bool sat = true;
            for (int g : gates)
                if (fig.d.gates[size_t(g)].kind == GateKind::literal) {
                    Lit l = fig.d.gates[size_t(g)].lit;
                    sat = sat && (a[lit_var(l)] == lit_positive(l));
                }
            sat_trees += sat;
            return true;
        });
        CHECK(val == (sat_trees > 0));
        if (val) CHECK(sat_trees == 1); // deterministic: exactly one
    }
}

TEST_CASE("reduce removes dangling gates only") {
    Figure fig;
    StructuredDnnf d = fig.d;
    size_t before = d.gates.size();
    StructuredDnnf r = reduce(d);
    CHECK(r.gates.size() == before); // already reduced
    // add a dangling and-gate
    d.gates.push_back({GateKind::and_gate, 0, {0, 9}, fig.va});
    StructuredDnnf r2 = reduce(d);
    CHECK(r2.gates.size() == before);
    CHECK(dnnf_table(r2).onset == dnnf_table(fig.d).onset);
}

TEST_CASE("forgetting a variable computes the projection") {
    Figure fig;
    // exists z: onset rows over (x,y): 11 -> 1 (z=1), 00 -> 1 (z=0), 10 -> 1 (z=0)
    StructuredDnnf d = forget(fig.d, 3);
    CHECK(validate_dnnf(d) <= 2);
    FunctionSpec t = dnnf_table(d);
    REQUIRE(t.vars == std::vector<Var>{1, 2});
    CHECK(t.onset.get(0b11));
    CHECK(t.onset.get(0b00));
    CHECK(t.onset.get(0b10));
    CHECK(!t.onset.get(0b01));

    // width never increases while forgetting
    CHECK(dnnf_width(d) <= dnnf_width(fig.d));

    // forgetting an absent variable is an error
    CHECK_THROWS_AS(forget(fig.d, 9), Error);
}

TEST_CASE("forgetting down to markers") {
    Figure fig;
    StructuredDnnf d = forget(forget(fig.d, 3), 2);
    // remaining function over x alone is constant true
    CHECK(d.trivial == StructuredDnnf::Trivial::const_true);
    CHECK(d.variables() == std::vector<Var>{1});
    CHECK(evaluate(d, Assignment(1)));
}

TEST_CASE("definability") {
    // XOR(x, z): z is definable from x on the onset
    Bitset onset(4);
    onset.set(0b01);
    onset.set(0b10);
    FunctionSpec xors({1, 2}, onset);
    CHECK(is_definable(xors, 2));

    // (x or y): y is not definable (x=1 admits both y values)
    Bitset or2(4);
    or2.set(0b01);
    or2.set(0b10);
    or2.set(0b11);
    FunctionSpec ors({1, 2}, or2);
    std::pair<std::uint64_t, std::uint64_t> conflict;
    CHECK(!is_definable(ors, 2, &conflict));
    CHECK(conflict.first == 0b10);
    CHECK(conflict.second == 0b11);
}

TEST_CASE("determinism-preserving forgetting") {
    Figure fig;
    // z is definable w.r.t. the figure's function: onset rows 111, 100, 000
    // never agree on (x,y) while differing on z
    StructuredDnnf red = with_verified_determinism(reduce(fig.d));
    StructuredDnnf d = forget_preserving_determinism(red, 3);
    CHECK(d.det == StructuredDnnf::Determinism::verified);
    CHECK(is_deterministic(d).ok);

    // x is not definable (000 and 100 agree on y,z) and gets refused
    CHECK_THROWS_WITH_AS(forget_preserving_determinism(red, 1), doctest::Contains("not definable"),
                         Error);
}

TEST_CASE("sdnnf round trip") {
    Figure fig;
    std::string text = write_sdnnf_string(fig.d);
    StructuredDnnf back = parse_sdnnf_string(text);
    CHECK(write_sdnnf_string(back) == text);
    CHECK(dnnf_table(back).onset == dnnf_table(fig.d).onset);

    StructuredDnnf marker = StructuredDnnf::make_trivial(StructuredDnnf::Trivial::const_true, {1, 2});
    std::string mt = write_sdnnf_string(marker);
    StructuredDnnf mb = parse_sdnnf_string(mt);
    CHECK(mb.trivial == StructuredDnnf::Trivial::const_true);
    CHECK(mb.trivial_vars == std::vector<Var>{1, 2});
}
