#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "widthforge/bitset.hpp"
#include "widthforge/cnf.hpp"

namespace widthforge {

// Explicit truth table of a Boolean function. Variables are kept in
// ascending id order; the variable with the smallest id is the most
// significant bit of the row index.
struct FunctionSpec {
    std::vector<Var> vars;               // ascending
    std::vector<std::string> var_names;  // aligned with vars, may be empty
    Bitset onset;                        // 2^vars.size() rows

    FunctionSpec() = default;
    FunctionSpec(std::vector<Var> vs, Bitset on);

    int num_vars() const { return int(vars.size()); }
    std::uint64_t num_rows() const { return std::uint64_t(1) << vars.size(); }

    // Row index of a total assignment over `vars`.
    std::uint64_t row_of(const Assignment &a) const;
    // Inverse: assignment (over a scope of max var id) for a row index.
    Assignment assignment_of(std::uint64_t row) const;

    std::string var_name(size_t i) const;
};

FunctionSpec parse_spec(std::istream &in);
FunctionSpec parse_spec_string(const std::string &text);
FunctionSpec parse_spec_file(const std::string &path);
void write_spec(const FunctionSpec &s, std::ostream &out);
std::string write_spec_string(const FunctionSpec &s);
void write_spec_file(const FunctionSpec &s, const std::string &path);

} // namespace widthforge
