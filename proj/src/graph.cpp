#include "widthforge/graph.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace widthforge {

Graph::Graph(int nvertices) : n(nvertices) {
    if (nvertices < 0) fail(ErrorKind::invalid, "negative vertex count");
    role.assign(size_t(n) + 1, VertexRole::plain);
    adj.assign(size_t(n) + 1, {});
}

void Graph::add_edge(int u, int v) {
    if (u < 1 || v < 1 || u > n || v > n)
        fail(ErrorKind::invalid, "edge endpoint outside vertex range");
    if (u == v) fail(ErrorKind::invalid, "self-loop at vertex " + std::to_string(u));
    if (u > v) std::swap(u, v);
    edges.emplace_back(u, v);
    if (signs) signs->push_back('+');
}

void Graph::add_signed_edge(int u, int v, char sign) {
    if (!signs) signs.emplace(edges.size(), '+');
    add_edge(u, v);
    if (sign != '+' && sign != '-') fail(ErrorKind::invalid, "edge sign must be + or -");
    signs->back() = sign;
}

bool Graph::has_edge(int u, int v) const {
    if (u > v) std::swap(u, v);
    return std::binary_search(edges.begin(), edges.end(), std::make_pair(u, v));
}

char Graph::sign_of(int u, int v) const {
    if (u > v) std::swap(u, v);
    auto it = std::lower_bound(edges.begin(), edges.end(), std::make_pair(u, v));
    if (it == edges.end() || *it != std::make_pair(u, v))
        fail(ErrorKind::invalid, "no such edge");
    return (*signs)[size_t(it - edges.begin())];
}

void Graph::finalize() {
    if (signs) {
        std::vector<std::pair<std::pair<int, int>, char>> tmp;
        tmp.reserve(edges.size());
        for (size_t i = 0; i < edges.size(); ++i) tmp.emplace_back(edges[i], (*signs)[i]);
        std::sort(tmp.begin(), tmp.end());
        tmp.erase(std::unique(tmp.begin(), tmp.end(),
                              [](auto &a, auto &b) { return a.first == b.first; }),
                  tmp.end());
        edges.clear();
        signs->clear();
        for (auto &[e, s] : tmp) {
            edges.push_back(e);
            signs->push_back(s);
        }
    } else {
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    }
    for (auto &l : adj) l.clear();
    for (auto &[u, v] : edges) {
        adj[size_t(u)].push_back(v);
        adj[size_t(v)].push_back(u);
    }
    for (auto &l : adj) std::sort(l.begin(), l.end());
}

Graph primal_graph(const CnfFormula &f) {
    Graph g(f.num_vars);
    for (Var v = 1; v <= f.num_vars; ++v) g.role[size_t(v)] = VertexRole::variable;
    for (const Clause &c : f.clauses)
        for (size_t i = 0; i < c.lits.size(); ++i)
            for (size_t j = i + 1; j < c.lits.size(); ++j)
                if (lit_var(c.lits[i]) != lit_var(c.lits[j]))
                    g.add_edge(lit_var(c.lits[i]), lit_var(c.lits[j]));
    g.finalize();
    return g;
}

Graph incidence_graph(const CnfFormula &f) {
    Graph g(f.num_vars + int(f.clauses.size()));
    for (Var v = 1; v <= f.num_vars; ++v) g.role[size_t(v)] = VertexRole::variable;
    for (size_t j = 0; j < f.clauses.size(); ++j) {
        int cv = f.num_vars + int(j) + 1;
        g.role[size_t(cv)] = VertexRole::clause;
        for (Lit l : f.clauses[j].lits) g.add_edge(lit_var(l), cv);
    }
    g.finalize();
    return g;
}

Graph dual_graph(const CnfFormula &f) {
    Graph g(int(f.clauses.size()));
    for (int j = 1; j <= g.n; ++j) g.role[size_t(j)] = VertexRole::clause;
    std::vector<std::vector<int>> occ(size_t(f.num_vars) + 1);
    for (size_t j = 0; j < f.clauses.size(); ++j)
        for (Lit l : f.clauses[j].lits) {
            auto &o = occ[size_t(lit_var(l))];
            if (o.empty() || o.back() != int(j) + 1) o.push_back(int(j) + 1);
        }
    for (auto &o : occ)
        for (size_t a = 0; a < o.size(); ++a)
            for (size_t b = a + 1; b < o.size(); ++b) g.add_edge(o[a], o[b]);
    g.finalize();
    return g;
}

Graph signed_incidence_graph(const CnfFormula &f) {
    for (size_t j = 0; j < f.clauses.size(); ++j)
        if (f.clauses[j].tautological)
            fail(ErrorKind::invalid, "clause " + std::to_string(j + 1) +
                                         " is tautological; its edge sign is undefined");
    Graph g(f.num_vars + int(f.clauses.size()));
    g.signs.emplace();
    for (Var v = 1; v <= f.num_vars; ++v) g.role[size_t(v)] = VertexRole::variable;
    for (size_t j = 0; j < f.clauses.size(); ++j) {
        int cv = f.num_vars + int(j) + 1;
        g.role[size_t(cv)] = VertexRole::clause;
        for (Lit l : f.clauses[j].lits)
            g.add_signed_edge(lit_var(l), cv, lit_positive(l) ? '+' : '-');
    }
    g.finalize();
    return g;
}

namespace {

// N(u)\{v} = N(v)\{u}, assuming sorted adjacency lists.
bool same_neighborhood_type(const Graph &g, int u, int v) {
    const auto &nu = g.adj[size_t(u)];
    const auto &nv = g.adj[size_t(v)];
    size_t i = 0, j = 0;
    while (i < nu.size() || j < nv.size()) {
        while (i < nu.size() && nu[i] == v) ++i;
        while (j < nv.size() && nv[j] == u) ++j;
        if (i == nu.size() || j == nv.size()) {
            return i == nu.size() && j == nv.size();
        }
        if (nu[i] != nv[j]) return false;
        ++i;
        ++j;
    }
    return true;
}

std::uint64_t neighborhood_hash(const Graph &g, int v) {
    // hash of N(v) with v-sized holes ignored: cheap prefilter only,
    // candidates are confirmed exactly
    std::uint64_t h = 1469598103934665603ull;
    for (int w : g.adj[size_t(v)]) {
        h ^= std::uint64_t(w) * 0x9e3779b97f4a7c15ull;
    }
    return h ^ (std::uint64_t(g.adj[size_t(v)].size()) << 32);
}

} // namespace

Contraction module_contraction(const Graph &g) {
    Contraction out;
    out.class_of.assign(size_t(g.n) + 1, 0);
    // Hash prefilter is sound for non-adjacent pairs only (there the type
    // relation degenerates to N(u) = N(v)); adjacent pairs are compared
    // exactly with the {u,v} exclusion.
    std::vector<std::uint64_t> h(size_t(g.n) + 1);
    for (int v = 1; v <= g.n; ++v) h[size_t(v)] = neighborhood_hash(g, v);
    for (int v = 1; v <= g.n; ++v) {
        if (out.class_of[size_t(v)] != 0) continue;
        out.class_of[size_t(v)] = v;
        for (int u = v + 1; u <= g.n; ++u) {
            if (out.class_of[size_t(u)] != 0) continue;
            if (g.role[size_t(u)] != g.role[size_t(v)]) continue;
            bool adjacent = g.has_edge(u, v);
            if (!adjacent && h[size_t(u)] != h[size_t(v)]) continue;
            if (same_neighborhood_type(g, v, u)) out.class_of[size_t(u)] = v;
        }
    }
    out.new_id.assign(size_t(g.n) + 1, 0);
    int k = 0;
    for (int v = 1; v <= g.n; ++v)
        if (out.class_of[size_t(v)] == v) out.new_id[size_t(v)] = ++k;
    for (int v = 1; v <= g.n; ++v)
        out.new_id[size_t(v)] = out.new_id[size_t(out.class_of[size_t(v)])];
    out.graph = Graph(k);
    for (int v = 1; v <= g.n; ++v)
        if (out.class_of[size_t(v)] == v)
            out.graph.role[size_t(out.new_id[size_t(v)])] = g.role[size_t(v)];
    for (auto &[u, v] : g.edges) {
        int a = out.new_id[size_t(u)], b = out.new_id[size_t(v)];
        if (a != b) out.graph.add_edge(a, b);
    }
    out.graph.finalize();
    return out;
}

Graph parse_gr(std::istream &in) {
    std::string line;
    int line_no = 0;
    Graph g;
    bool header = false;
    int declared_edges = 0;
    std::vector<std::tuple<int, int, char>> sedges;
    bool any_sign = false;
    std::vector<std::pair<int, VertexRole>> roles;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "c") {
            std::string kind;
            if (ls >> kind && kind == "role") {
                int v;
                std::string r;
                if (ls >> v >> r)
                    roles.emplace_back(v, r == "variable" ? VertexRole::variable
                                          : r == "clause" ? VertexRole::clause
                                                          : VertexRole::plain);
            }
            continue;
        }
        if (tok == "p") {
            std::string fmt;
            int nv, ne;
            if (header || !(ls >> fmt >> nv >> ne) || fmt != "tw")
                fail(ErrorKind::parse, "line " + std::to_string(line_no) + ": malformed .gr header");
            g = Graph(nv);
            declared_edges = ne;
            header = true;
            continue;
        }
        if (!header) fail(ErrorKind::parse, "edge before .gr header");
        int u = std::stoi(tok), v;
        if (!(ls >> v)) fail(ErrorKind::parse, "line " + std::to_string(line_no) + ": missing edge endpoint");
        std::string s;
        if (ls >> s) {
            if (s != "+" && s != "-")
                fail(ErrorKind::parse, "line " + std::to_string(line_no) + ": bad edge sign");
            any_sign = true;
            sedges.emplace_back(u, v, s[0]);
        } else {
            sedges.emplace_back(u, v, '+');
        }
    }
    if (!header) fail(ErrorKind::parse, "missing .gr header");
    if (int(sedges.size()) != declared_edges)
        fail(ErrorKind::parse, "header declares " + std::to_string(declared_edges) +
                                   " edges but file contains " + std::to_string(sedges.size()));
    for (auto &[u, v, s] : sedges) {
        if (any_sign) g.add_signed_edge(u, v, s);
        else g.add_edge(u, v);
    }
    for (auto &[v, r] : roles)
        if (v >= 1 && v <= g.n) g.role[size_t(v)] = r;
    g.finalize();
    return g;
}

Graph parse_gr_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::io, "cannot open " + path);
    return parse_gr(in);
}

void write_gr(const Graph &g, std::ostream &out) {
    out << "p tw " << g.n << ' ' << g.edges.size() << '\n';
    for (int v = 1; v <= g.n; ++v) {
        if (g.role[size_t(v)] == VertexRole::variable) out << "c role " << v << " variable\n";
        else if (g.role[size_t(v)] == VertexRole::clause) out << "c role " << v << " clause\n";
    }
    for (size_t i = 0; i < g.edges.size(); ++i) {
        out << g.edges[i].first << ' ' << g.edges[i].second;
        if (g.signs) out << ' ' << (*g.signs)[i];
        out << '\n';
    }
}

void write_gr_file(const Graph &g, const std::string &path) {
    std::ofstream out(path);
    if (!out) fail(ErrorKind::io, "cannot open " + path + " for writing");
    write_gr(g, out);
}

} // namespace widthforge
