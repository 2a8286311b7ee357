#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "widthforge/graph.hpp"

namespace widthforge {

// Rooted tree decomposition. Nodes are 1..num_nodes; node 1 is the root by
// convention (serialization renumbers so this stays true on round trips).
struct TreeDecomposition {
    int num_nodes = 0;
    std::vector<std::vector<int>> bags;       // indexed 1..num_nodes, sorted
    std::vector<std::pair<int, int>> edges;   // tree edges
    bool special = false;                     // leaf-root path condition claimed

    explicit TreeDecomposition(int nodes = 0);
    int add_node(std::vector<int> bag);       // returns new node id
    void add_edge(int a, int b);

    int width() const;                        // max bag size - 1
    std::vector<int> parent_of(int root = 1) const; // parent array, parent[root]=0
    std::vector<std::vector<int>> children_of(int root = 1) const;
};

// Checks all decomposition invariants against the graph and returns the
// width. Violations carry the offending vertex/edge/node in the message.
int validate_td(const Graph &g, const TreeDecomposition &t);

// True iff t is a valid decomposition of g AND every vertex's occurrence set
// lies on a single leaf-root path (checked, not just the flag).
bool is_special_td(const Graph &g, const TreeDecomposition &t, std::string *why = nullptr);

// PACE-style .td format, extended with `c special` when the flag is set.
TreeDecomposition parse_td(std::istream &in);
TreeDecomposition parse_td_file(const std::string &path);
void write_td(const TreeDecomposition &t, std::ostream &out);
void write_td_file(const TreeDecomposition &t, const std::string &path);

} // namespace widthforge
