#include <doctest.h>

#include "helpers.hpp"
#include "widthforge/oracle.hpp"

using namespace widthforge;
using testing::example1;

TEST_CASE("dimacs parsing basics") {
    CnfFormula f = parse_dimacs_string("p cnf 2 1\n1 -2 0\n");
    CHECK(f.num_vars == 2);
    REQUIRE(f.clauses.size() == 1);
    CHECK(f.clauses[0].lits == std::vector<Lit>{1, -2});

    // duplicate literals collapse
    CnfFormula g = parse_dimacs_string("p cnf 1 1\n1 1 0\n");
    CHECK(g.clauses[0].lits == std::vector<Lit>{1});
    CHECK(!g.clauses[0].tautological);

    // tautological clauses are kept but flagged
    CnfFormula t = parse_dimacs_string("p cnf 1 1\n1 -1 0\n");
    CHECK(t.clauses[0].tautological);
}

TEST_CASE("dimacs parsing errors") {
    CHECK_THROWS_AS(parse_dimacs_string("p cnf 2\n1 0\n"), Error);
    CHECK_THROWS_AS(parse_dimacs_string("p cnf 1 1\n2 0\n"), Error);  // id over count
    CHECK_THROWS_AS(parse_dimacs_string("p cnf 1 1\n1\n"), Error);    // missing 0
    CHECK_THROWS_AS(parse_dimacs_string("p cnf 1 2\n1 0\n"), Error);  // count mismatch
    CHECK_THROWS_AS(parse_dimacs_string("1 0\n"), Error);             // no header
}

TEST_CASE("aux declarations round-trip") {
    CnfFormula f = parse_dimacs_string("p cnf 3 1\nc aux 2 3\n1 2 0\n");
    CHECK(f.input_vars() == std::vector<Var>{1});
    CHECK(f.aux_vars() == std::vector<Var>{2, 3});
    CnfFormula g = parse_dimacs_string(write_dimacs_string(f));
    CHECK(g.aux_vars() == f.aux_vars());
    CHECK(write_dimacs_string(g) == write_dimacs_string(f));
}

TEST_CASE("example 1 parses to four clauses with a wide second clause") {
    std::string text = "p cnf 5 4\n1 -2 0\n2 3 -4 -5 0\n-4 5 0\n4 5 0\n";
    CnfFormula f = parse_dimacs_string(text);
    REQUIRE(f.clauses.size() == 4);
    CHECK(f.clauses[1].lits.size() == 4);
}

TEST_CASE("eval") {
    CnfFormula f = example1();
    Assignment a(5);
    a.set(1, 1); // (1,0,0,0,1)
    a.set(5, 1);
    CHECK(eval(f, a));
    Assignment b(5); // all zero falsifies C4
    CHECK(!eval(f, b));
    CHECK(eval(CnfFormula(0), Assignment(0))); // empty conjunction
}

TEST_CASE("models") {
    // naive AtMostOne_4 has 5 models
    CnfFormula f(4);
    for (int i = 1; i <= 4; ++i)
        for (int j = i + 1; j <= 4; ++j) f.add_clause({-i, -j});
    CHECK(models(f).set.count() == 5);

    CnfFormula unsat(1);
    unsat.add_clause({1});
    unsat.add_clause({-1});
    CHECK(models(unsat).set.count() == 0);

    // adding a tautological clause changes nothing
    CnfFormula g = example1();
    auto before = models(g).set;
    g.add_clause({3, -3});
    CHECK(models(g).set == before);
}

TEST_CASE("projection and clausal encoding checks") {
    // (x1 or y1) with y1 auxiliary: y1 free when x1 = 1
    CnfFormula f(2);
    f.mark_aux(2);
    f.add_clause({1, 2});
    auto dep = has_dependent_aux(f);
    CHECK(!dep.ok);
    REQUIRE(dep.witness);
    CHECK(dep.witness->first[1] == dep.witness->second[1]);
    CHECK(dep.witness->first[2] != dep.witness->second[2]);

    FunctionSpec proj = project_models(f);
    CHECK(proj.onset.count() == 2); // x1=0 (y1=1 extension) and x1=1

    // a formula without aux vars encodes its own projection
    CnfFormula g = example1();
    CHECK(is_clausal_encoding(g, project_models(g)).ok);
}

TEST_CASE("clausal encoding counterexample") {
    // claim x1 or x2 is an encoding of constant-true: fails on 00
    CnfFormula f(2);
    f.add_clause({1, 2});
    FunctionSpec all_true({1, 2}, Bitset(4, true));
    auto chk = is_clausal_encoding(f, all_true);
    CHECK(!chk.ok);
    REQUIRE(chk.counterexample);
    CHECK(!(*chk.counterexample)[1]);
    CHECK(!(*chk.counterexample)[2]);
}

TEST_CASE("function spec io round trip") {
    CnfFormula g = testing::example1();
    FunctionSpec s = project_models(g);
    FunctionSpec back = parse_spec_string(write_spec_string(s));
    CHECK(back.vars == s.vars);
    CHECK(back.onset == s.onset);
    CHECK(write_spec_string(back) == write_spec_string(s));
}

TEST_CASE("aux-free random formulas always encode their projection") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        CnfFormula f = testing::random_cnf(seed, 3 + int(seed % 5), 6, 3);
        CHECK(is_clausal_encoding(f, project_models(f)).ok);
    }
}

TEST_CASE("dependent aux implies model count equals onset count") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        CnfFormula f = testing::random_cnf(seed, 6, 8, 3);
        f.mark_aux(5);
        f.mark_aux(6);
        auto dep = has_dependent_aux(f);
        if (dep.ok) CHECK(models(f).set.count() == project_models(f).onset.count());
    }
}

TEST_CASE("thread count is read from the environment") {
    CHECK(worker_count() >= 1);
}
