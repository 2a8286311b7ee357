#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "widthforge/graph.hpp"

namespace widthforge {

// Algebraic k-expression in postfix form: a stack program whose final stack
// holds one labeled graph. Signed mode is implied by signed join operators.
//   v <id> <label>    create vertex
//   u                 disjoint union of the two top graphs
//   j <i> <j> [+|-]   join all label-i vertices to all label-j vertices
//   r <i> <j>         rename label i to j
struct CwOp {
    enum Kind : unsigned char { create, unite, join, rename } kind;
    int a = 0, b = 0;   // create: a=vertex b=label; join/rename: labels
    char sign = 0;      // '+'/'-' for signed joins, 0 otherwise
};

struct CwExpression {
    std::vector<CwOp> ops;

    void create(int vertex, int label) { ops.push_back({CwOp::create, vertex, label, 0}); }
    void unite() { ops.push_back({CwOp::unite, 0, 0, 0}); }
    void join(int i, int j, char sign = 0) { ops.push_back({CwOp::join, i, j, sign}); }
    void rename(int i, int j) { ops.push_back({CwOp::rename, i, j, 0}); }

    bool is_signed() const;
    // distinct labels mentioned anywhere in the term
    int labels_used() const;
};

// Evaluation result: vertices with their final labels plus the edge set.
struct LabeledGraph {
    std::map<int, int> label;                 // vertex -> label
    std::map<std::pair<int, int>, char> edge; // (u<v) -> sign ('+' in unsigned mode)
    bool is_signed = false;
};

LabeledGraph eval_expression(const CwExpression &e);

// Checks that the expression evaluates exactly to g (vertices, edges, signs;
// labels are discarded) and returns the number of distinct labels used.
// The first differing vertex/edge is reported on mismatch.
int validate_expression(const CwExpression &e, const Graph &g);

// .cwx text format, one operator per line.
CwExpression parse_cwx(std::istream &in);
CwExpression parse_cwx_file(const std::string &path);
void write_cwx(const CwExpression &e, std::ostream &out);
void write_cwx_file(const CwExpression &e, const std::string &path);

} // namespace widthforge
