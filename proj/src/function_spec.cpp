#include "widthforge/function_spec.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace widthforge {

FunctionSpec::FunctionSpec(std::vector<Var> vs, Bitset on) {
    std::sort(vs.begin(), vs.end());
    if (std::adjacent_find(vs.begin(), vs.end()) != vs.end())
        fail(ErrorKind::invalid, "duplicate variable in function spec");
    if (int(vs.size()) > kBruteForceVarCap)
        fail(ErrorKind::cap, "function spec over " + std::to_string(vs.size()) +
                                 " variables exceeds the " + std::to_string(kBruteForceVarCap) +
                                 "-variable table cap");
    if (on.size() != (std::uint64_t(1) << vs.size()))
        fail(ErrorKind::invalid, "onset bitset length is not 2^|vars|");
    vars = std::move(vs);
    var_names.assign(vars.size(), "");
    onset = std::move(on);
}

std::uint64_t FunctionSpec::row_of(const Assignment &a) const {
    std::uint64_t row = 0;
    int m = num_vars();
    for (int i = 0; i < m; ++i)
        if (a[vars[size_t(i)]]) row |= std::uint64_t(1) << (m - 1 - i);
    return row;
}

Assignment FunctionSpec::assignment_of(std::uint64_t row) const {
    int m = num_vars();
    Var maxv = vars.empty() ? 0 : vars.back();
    Assignment a(maxv);
    for (int i = 0; i < m; ++i)
        a.set(vars[size_t(i)], (row >> (m - 1 - i)) & 1);
    return a;
}

std::string FunctionSpec::var_name(size_t i) const {
    if (i < var_names.size() && !var_names[i].empty()) return var_names[i];
    return "x" + std::to_string(vars[i]);
}

FunctionSpec parse_spec(std::istream &in) {
    std::string line, vars_line, onset_line;
    while (std::getline(in, line)) {
        if (line.rfind("vars:", 0) == 0) vars_line = line.substr(5);
        else if (line.rfind("onset:", 0) == 0) onset_line = line.substr(6);
    }
    if (vars_line.empty() || onset_line.empty())
        fail(ErrorKind::parse, "spec file needs a 'vars:' and an 'onset:' line");
    std::istringstream vs(vars_line);
    std::vector<Var> ids;
    std::vector<std::string> names;
    std::string tok;
    bool all_canonical = true;
    while (vs >> tok) {
        names.push_back(tok);
        Var id = 0;
        if (tok.size() > 1 && tok[0] == 'x') {
            bool digits = true;
            for (size_t i = 1; i < tok.size(); ++i) digits = digits && isdigit((unsigned char)tok[i]);
            if (digits) id = std::stoi(tok.substr(1));
        }
        if (id <= 0) all_canonical = false;
        ids.push_back(id);
    }
    if (!all_canonical)
        for (size_t i = 0; i < ids.size(); ++i) ids[i] = Var(i) + 1;
    std::istringstream os(onset_line);
    std::string hex;
    os >> hex;
    FunctionSpec s(ids, Bitset::from_hex(hex, std::uint64_t(1) << ids.size()));
    // names follow the (sorted) id order used at construction
    std::vector<std::pair<Var, std::string>> pairs;
    for (size_t i = 0; i < ids.size(); ++i) pairs.emplace_back(ids[i], names[i]);
    std::sort(pairs.begin(), pairs.end());
    for (size_t i = 0; i < pairs.size(); ++i) s.var_names[i] = pairs[i].second;
    return s;
}

FunctionSpec parse_spec_string(const std::string &text) {
    std::istringstream in(text);
    return parse_spec(in);
}

FunctionSpec parse_spec_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::io, "cannot open " + path);
    return parse_spec(in);
}

void write_spec(const FunctionSpec &s, std::ostream &out) {
    out << "vars:";
    for (size_t i = 0; i < s.vars.size(); ++i) out << ' ' << s.var_name(i);
    out << "\nonset: " << s.onset.to_hex() << '\n';
}

std::string write_spec_string(const FunctionSpec &s) {
    std::ostringstream out;
    write_spec(s, out);
    return out.str();
}

void write_spec_file(const FunctionSpec &s, const std::string &path) {
    std::ofstream out(path);
    if (!out) fail(ErrorKind::io, "cannot open " + path + " for writing");
    write_spec(s, out);
}

} // namespace widthforge
