#pragma once

#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "widthforge/common.hpp"

namespace widthforge {

// Variables are positive integers 1..num_vars. Literals use the DIMACS
// convention: +v for the positive literal, -v for the negative one.
using Var = int;
using Lit = int;

inline Var lit_var(Lit l) { return l < 0 ? -l : l; }
inline bool lit_positive(Lit l) { return l > 0; }

struct Clause {
    // Sorted by variable id, positive literal before negative; duplicates
    // collapsed at construction.
    std::vector<Lit> lits;
    bool tautological = false;

    Clause() = default;
    explicit Clause(std::vector<Lit> raw);

    size_t size() const { return lits.size(); }
    bool contains(Lit l) const;
};

struct CnfFormula {
    int num_vars = 0;
    std::vector<Clause> clauses;
    // Partition of 1..num_vars into inputs (the encoded function's X) and
    // auxiliary variables (the Y of a clausal encoding). Defaults: all inputs.
    std::vector<bool> is_aux; // indexed 1..num_vars
    std::vector<std::string> var_names; // indexed 1..num_vars, may be empty

    CnfFormula() = default;
    explicit CnfFormula(int nvars) { set_num_vars(nvars); }

    void set_num_vars(int nvars);
    void add_clause(std::vector<Lit> lits);
    void mark_aux(Var v);

    std::vector<Var> input_vars() const;
    std::vector<Var> aux_vars() const;
    int num_inputs() const;
    int num_aux() const { return num_vars - num_inputs(); }

    std::string var_name(Var v) const;
};

// A total assignment over variables 1..num_vars, stored as value bits.
struct Assignment {
    std::vector<bool> value; // indexed 1..scope size, value[0] unused
    explicit Assignment(int nvars = 0) : value(size_t(nvars) + 1, false) {}
    int num_vars() const { return int(value.size()) - 1; }
    bool operator[](Var v) const { return value[size_t(v)]; }
    void set(Var v, bool b) { value[size_t(v)] = b; }
};

// DIMACS CNF with the `c aux <id>...` extension for auxiliary variables.
CnfFormula parse_dimacs(std::istream &in);
CnfFormula parse_dimacs_string(const std::string &text);
CnfFormula parse_dimacs_file(const std::string &path);
void write_dimacs(const CnfFormula &f, std::ostream &out);
std::string write_dimacs_string(const CnfFormula &f);
void write_dimacs_file(const CnfFormula &f, const std::string &path);

} // namespace widthforge
