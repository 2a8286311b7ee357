#include "widthforge/cwexpr.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace widthforge {

bool CwExpression::is_signed() const {
    for (const CwOp &op : ops)
        if (op.kind == CwOp::join && op.sign != 0) return true;
    return false;
}

int CwExpression::labels_used() const {
    std::set<int> labels;
    for (const CwOp &op : ops) {
        if (op.kind == CwOp::create) labels.insert(op.b);
        else if (op.kind == CwOp::join || op.kind == CwOp::rename) {
            labels.insert(op.a);
            labels.insert(op.b);
        }
    }
    return int(labels.size());
}

LabeledGraph eval_expression(const CwExpression &e) {
    bool signed_mode = e.is_signed();
    std::vector<LabeledGraph> stack;
    size_t at = 0;
    for (const CwOp &op : e.ops) {
        ++at;
        switch (op.kind) {
        case CwOp::create: {
            LabeledGraph g;
            g.is_signed = signed_mode;
            g.label[op.a] = op.b;
            stack.push_back(std::move(g));
            break;
        }
        case CwOp::unite: {
            if (stack.size() < 2)
                fail(ErrorKind::invalid, "op " + std::to_string(at) + ": union needs two graphs");
            LabeledGraph right = std::move(stack.back());
            stack.pop_back();
            LabeledGraph &left = stack.back();
            for (auto &[v, l] : right.label) {
                if (left.label.count(v))
                    fail(ErrorKind::invalid, "op " + std::to_string(at) + ": union operands share vertex " +
                                                 std::to_string(v));
                left.label[v] = l;
            }
            for (auto &[uv, s] : right.edge) left.edge[uv] = s;
            break;
        }
        case CwOp::join: {
            if (stack.empty())
                fail(ErrorKind::invalid, "op " + std::to_string(at) + ": join on empty stack");
            if (op.a == op.b)
                fail(ErrorKind::invalid, "op " + std::to_string(at) + ": join with equal labels");
            if (signed_mode && op.sign == 0)
                fail(ErrorKind::invalid, "op " + std::to_string(at) + ": unsigned join in a signed expression");
            LabeledGraph &g = stack.back();
            std::vector<int> is, js;
            for (auto &[v, l] : g.label) {
                if (l == op.a) is.push_back(v);
                if (l == op.b) js.push_back(v);
            }
            char s = signed_mode ? op.sign : '+';
            for (int u : is)
                for (int v : js) {
                    auto key = std::minmax(u, v);
                    auto it = g.edge.find({key.first, key.second});
                    if (it == g.edge.end()) g.edge[{key.first, key.second}] = s;
                    else if (it->second != s)
                        fail(ErrorKind::invalid, "op " + std::to_string(at) + ": edge {" +
                                                     std::to_string(key.first) + "," +
                                                     std::to_string(key.second) +
                                                     "} rejoined with a different sign");
                }
            break;
        }
        case CwOp::rename: {
            if (stack.empty())
                fail(ErrorKind::invalid, "op " + std::to_string(at) + ": rename on empty stack");
            if (op.a == op.b)
                fail(ErrorKind::invalid, "op " + std::to_string(at) + ": rename with equal labels");
            for (auto &[v, l] : stack.back().label)
                if (l == op.a) l = op.b;
            break;
        }
        }
    }
    if (stack.empty()) return LabeledGraph{{}, {}, signed_mode}; // empty expression: empty graph
    if (stack.size() > 1)
        fail(ErrorKind::invalid, "expression leaves " + std::to_string(stack.size()) +
                                     " graphs on the stack");
    return std::move(stack.back());
}

int validate_expression(const CwExpression &e, const Graph &g) {
    LabeledGraph got = eval_expression(e);
    for (int v = 1; v <= g.n; ++v)
        if (!got.label.count(v))
            fail(ErrorKind::mismatch, "vertex " + std::to_string(v) + " is never created");
    for (auto &[v, l] : got.label)
        if (v < 1 || v > g.n)
            fail(ErrorKind::mismatch, "expression creates unknown vertex " + std::to_string(v));
    bool want_signed = g.is_signed();
    for (size_t i = 0; i < g.edges.size(); ++i) {
        auto [u, v] = g.edges[i];
        auto it = got.edge.find({u, v});
        if (it == got.edge.end())
            fail(ErrorKind::mismatch, "edge {" + std::to_string(u) + "," + std::to_string(v) +
                                          "} missing from the evaluated graph");
        char want = want_signed ? (*g.signs)[i] : '+';
        if (it->second != want)
            fail(ErrorKind::mismatch, "edge {" + std::to_string(u) + "," + std::to_string(v) +
                                          "} has sign " + std::string(1, it->second) + ", expected " +
                                          std::string(1, want));
    }
    for (auto &[uv, s] : got.edge) {
        (void)s;
        if (!g.has_edge(uv.first, uv.second))
            fail(ErrorKind::mismatch, "evaluated graph has extra edge {" + std::to_string(uv.first) +
                                          "," + std::to_string(uv.second) + "}");
    }
    return e.labels_used();
}

CwExpression parse_cwx(std::istream &in) {
    CwExpression e;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok) || tok == "c") continue;
        if (tok == "v") {
            int id, label;
            if (!(ls >> id >> label))
                fail(ErrorKind::parse, "line " + std::to_string(line_no) + ": v needs <id> <label>");
            e.create(id, label);
        } else if (tok == "u") {
            e.unite();
        } else if (tok == "j") {
            int i, j;
            if (!(ls >> i >> j))
                fail(ErrorKind::parse, "line " + std::to_string(line_no) + ": j needs <i> <j>");
            std::string s;
            if (ls >> s) {
                if (s != "+" && s != "-")
                    fail(ErrorKind::parse, "line " + std::to_string(line_no) + ": bad join sign");
                e.join(i, j, s[0]);
            } else {
                e.join(i, j);
            }
        } else if (tok == "r") {
            int i, j;
            if (!(ls >> i >> j))
                fail(ErrorKind::parse, "line " + std::to_string(line_no) + ": r needs <i> <j>");
            e.rename(i, j);
        } else {
            fail(ErrorKind::parse, "line " + std::to_string(line_no) + ": unknown operator " + tok);
        }
    }
    return e;
}

CwExpression parse_cwx_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::io, "cannot open " + path);
    return parse_cwx(in);
}

void write_cwx(const CwExpression &e, std::ostream &out) {
    for (const CwOp &op : e.ops) {
        switch (op.kind) {
        case CwOp::create: out << "v " << op.a << ' ' << op.b << '\n'; break;
        case CwOp::unite: out << "u\n"; break;
        case CwOp::join:
            out << "j " << op.a << ' ' << op.b;
            if (op.sign) out << ' ' << op.sign;
            out << '\n';
            break;
        case CwOp::rename: out << "r " << op.a << ' ' << op.b << '\n'; break;
        }
    }
}

void write_cwx_file(const CwExpression &e, const std::string &path) {
    std::ofstream out(path);
    if (!out) fail(ErrorKind::io, "cannot open " + path + " for writing");
    write_cwx(e, out);
}

} // namespace widthforge
