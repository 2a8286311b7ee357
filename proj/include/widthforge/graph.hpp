#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "widthforge/cnf.hpp"

namespace widthforge {

enum class VertexRole : unsigned char { plain, variable, clause };

// Undirected simple graph on vertices 1..n with role tags; an optional sign
// per edge turns it into a signed graph. Vertex ids are stable across the
// formula-graph constructions so witnesses can reference them:
//   primal:    vertex v      = variable v
//   incidence: vertex v      = variable v, vertex num_vars + j = clause j
//   dual:      vertex j      = clause j
struct Graph {
    int n = 0;
    std::vector<VertexRole> role;              // indexed 1..n
    std::vector<std::vector<int>> adj;         // sorted neighbor lists
    std::vector<std::pair<int, int>> edges;    // u < v, sorted
    std::optional<std::vector<char>> signs;    // aligned with edges: '+'/'-'

    explicit Graph(int nvertices = 0);
    void add_edge(int u, int v);
    void add_signed_edge(int u, int v, char sign);
    bool has_edge(int u, int v) const;
    void finalize(); // sort edge/adjacency lists, dedupe
    bool is_signed() const { return signs.has_value(); }
    int num_edges() const { return int(edges.size()); }
    char sign_of(int u, int v) const;
};

Graph primal_graph(const CnfFormula &f);
Graph incidence_graph(const CnfFormula &f);
Graph dual_graph(const CnfFormula &f);
// Rejects formulas with tautological clauses (edge sign would be ambiguous).
Graph signed_incidence_graph(const CnfFormula &f);

// Contraction of neighborhood-type classes: vertices u, v are equivalent iff
// N(u)\{v} = N(v)\{u}; one representative (the smallest id) survives per
// class. Vertices of different roles are never merged.
struct Contraction {
    Graph graph;                 // induced on representatives, ids renumbered 1..k
    std::vector<int> class_of;   // original vertex -> representative (original id)
    std::vector<int> new_id;     // original vertex -> id of its class in `graph`
};

Contraction module_contraction(const Graph &g);

// PACE-style `.gr` text format; signed graphs carry a third edge column.
Graph parse_gr(std::istream &in);
Graph parse_gr_file(const std::string &path);
void write_gr(const Graph &g, std::ostream &out);
void write_gr_file(const Graph &g, const std::string &path);

} // namespace widthforge
