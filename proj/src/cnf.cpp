#include "widthforge/cnf.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace widthforge {

Clause::Clause(std::vector<Lit> raw) {
    std::sort(raw.begin(), raw.end(), [](Lit a, Lit b) {
        if (lit_var(a) != lit_var(b)) return lit_var(a) < lit_var(b);
        return a > b; // positive first
    });
    raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
    for (size_t i = 0; i + 1 < raw.size(); ++i)
        if (lit_var(raw[i]) == lit_var(raw[i + 1])) tautological = true;
    lits = std::move(raw);
}

bool Clause::contains(Lit l) const {
    return std::find(lits.begin(), lits.end(), l) != lits.end();
}

void CnfFormula::set_num_vars(int nvars) {
    if (nvars < 0) fail(ErrorKind::invalid, "negative variable count");
    num_vars = nvars;
    is_aux.assign(size_t(nvars) + 1, false);
    var_names.assign(size_t(nvars) + 1, "");
}

void CnfFormula::add_clause(std::vector<Lit> lits) {
    for (Lit l : lits) {
        if (l == 0 || lit_var(l) > num_vars)
            fail(ErrorKind::invalid, "literal " + std::to_string(l) +
                                         " outside declared variable range");
    }
    clauses.emplace_back(std::move(lits));
}

void CnfFormula::mark_aux(Var v) {
    if (v < 1 || v > num_vars)
        fail(ErrorKind::invalid, "aux declaration for unknown variable " + std::to_string(v));
    is_aux[size_t(v)] = true;
}

std::vector<Var> CnfFormula::input_vars() const {
    std::vector<Var> out;
    for (Var v = 1; v <= num_vars; ++v)
        if (!is_aux[size_t(v)]) out.push_back(v);
    return out;
}

std::vector<Var> CnfFormula::aux_vars() const {
    std::vector<Var> out;
    for (Var v = 1; v <= num_vars; ++v)
        if (is_aux[size_t(v)]) out.push_back(v);
    return out;
}

int CnfFormula::num_inputs() const {
    int n = 0;
    for (Var v = 1; v <= num_vars; ++v)
        if (!is_aux[size_t(v)]) ++n;
    return n;
}

std::string CnfFormula::var_name(Var v) const {
    if (v >= 1 && v <= num_vars && !var_names[size_t(v)].empty()) return var_names[size_t(v)];
    return "x" + std::to_string(v);
}

CnfFormula parse_dimacs(std::istream &in) {
    CnfFormula f;
    bool header_seen = false;
    int declared_clauses = 0;
    std::vector<Var> pending_aux;
    std::vector<std::pair<Var, std::string>> pending_names;
    std::vector<Lit> cur;
    bool in_clause = false;
    int line_no = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "c") {
            std::string kind;
            if (ls >> kind) {
                if (kind == "aux") {
                    Var v;
                    while (ls >> v) pending_aux.push_back(v);
                } else if (kind == "name") {
                    Var v;
                    std::string name;
                    if (ls >> v >> name) pending_names.emplace_back(v, name);
                }
            }
            continue;
        }
        if (tok == "p") {
            std::string fmt;
            int nv = -1, nc = -1;
            if (header_seen || !(ls >> fmt >> nv >> nc) || fmt != "cnf" || nv < 0 || nc < 0)
                fail(ErrorKind::parse, "line " + std::to_string(line_no) + ": malformed DIMACS header");
            f.set_num_vars(nv);
            declared_clauses = nc;
            header_seen = true;
            continue;
        }
        if (!header_seen)
            fail(ErrorKind::parse, "line " + std::to_string(line_no) + ": clause data before header");
        // clause literals, possibly spanning lines until a 0
        std::istringstream body(line);
        Lit l;
        while (body >> l) {
            if (l == 0) {
                f.add_clause(cur);
                cur.clear();
                in_clause = false;
            } else {
                if (lit_var(l) > f.num_vars)
                    fail(ErrorKind::parse, "line " + std::to_string(line_no) + ": variable " +
                                               std::to_string(lit_var(l)) +
                                               " exceeds declared count " + std::to_string(f.num_vars));
                cur.push_back(l);
                in_clause = true;
            }
        }
        if (body.fail() && !body.eof())
            fail(ErrorKind::parse, "line " + std::to_string(line_no) + ": non-numeric clause token");
    }
    if (!header_seen) fail(ErrorKind::parse, "missing DIMACS header");
    if (in_clause) fail(ErrorKind::parse, "last clause is missing its 0 terminator");
    if (int(f.clauses.size()) != declared_clauses)
        fail(ErrorKind::parse, "header declares " + std::to_string(declared_clauses) +
                                   " clauses but file contains " + std::to_string(f.clauses.size()));
    for (Var v : pending_aux) f.mark_aux(v);
    for (auto &[v, name] : pending_names) {
        if (v >= 1 && v <= f.num_vars) f.var_names[size_t(v)] = name;
    }
    return f;
}

CnfFormula parse_dimacs_string(const std::string &text) {
    std::istringstream in(text);
    return parse_dimacs(in);
}

CnfFormula parse_dimacs_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::io, "cannot open " + path);
    return parse_dimacs(in);
}

void write_dimacs(const CnfFormula &f, std::ostream &out) {
    out << "p cnf " << f.num_vars << ' ' << f.clauses.size() << '\n';
    auto aux = f.aux_vars();
    if (!aux.empty()) {
        out << "c aux";
        for (Var v : aux) out << ' ' << v;
        out << '\n';
    }
    for (Var v = 1; v <= f.num_vars; ++v)
        if (!f.var_names[size_t(v)].empty()) out << "c name " << v << ' ' << f.var_names[size_t(v)] << '\n';
    for (const Clause &c : f.clauses) {
        for (Lit l : c.lits) out << l << ' ';
        out << "0\n";
    }
}

std::string write_dimacs_string(const CnfFormula &f) {
    std::ostringstream out;
    write_dimacs(f, out);
    return out.str();
}

void write_dimacs_file(const CnfFormula &f, const std::string &path) {
    std::ofstream out(path);
    if (!out) fail(ErrorKind::io, "cannot open " + path + " for writing");
    write_dimacs(f, out);
}

} // namespace widthforge
