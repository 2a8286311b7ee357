#include "widthforge/treedecomp.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <sstream>

namespace widthforge {

TreeDecomposition::TreeDecomposition(int nodes) : num_nodes(nodes) {
    bags.assign(size_t(nodes) + 1, {});
}

int TreeDecomposition::add_node(std::vector<int> bag) {
    std::sort(bag.begin(), bag.end());
    bag.erase(std::unique(bag.begin(), bag.end()), bag.end());
    bags.push_back(std::move(bag));
    return ++num_nodes;
}

void TreeDecomposition::add_edge(int a, int b) {
    if (a < 1 || b < 1 || a > num_nodes || b > num_nodes || a == b)
        fail(ErrorKind::invalid, "bad decomposition tree edge");
    edges.emplace_back(a, b);
}

int TreeDecomposition::width() const {
    size_t mx = 0;
    for (int i = 1; i <= num_nodes; ++i) mx = std::max(mx, bags[size_t(i)].size());
    return int(mx) - 1;
}

std::vector<int> TreeDecomposition::parent_of(int root) const {
    std::vector<std::vector<int>> nb(size_t(num_nodes) + 1);
    for (auto &[a, b] : edges) {
        nb[size_t(a)].push_back(b);
        nb[size_t(b)].push_back(a);
    }
    std::vector<int> parent(size_t(num_nodes) + 1, -1);
    std::queue<int> q;
    q.push(root);
    parent[size_t(root)] = 0;
    while (!q.empty()) {
        int t = q.front();
        q.pop();
        for (int s : nb[size_t(t)])
            if (parent[size_t(s)] == -1) {
                parent[size_t(s)] = t;
                q.push(s);
            }
    }
    return parent;
}

std::vector<std::vector<int>> TreeDecomposition::children_of(int root) const {
    auto parent = parent_of(root);
    std::vector<std::vector<int>> ch(size_t(num_nodes) + 1);
    for (int t = 1; t <= num_nodes; ++t)
        if (t != root && parent[size_t(t)] > 0) ch[size_t(parent[size_t(t)])].push_back(t);
    return ch;
}

int validate_td(const Graph &g, const TreeDecomposition &t) {
    if (t.num_nodes < 1) fail(ErrorKind::mismatch, "decomposition has no nodes");
    if (int(t.edges.size()) != t.num_nodes - 1)
        fail(ErrorKind::mismatch, "decomposition tree has " + std::to_string(t.edges.size()) +
                                      " edges for " + std::to_string(t.num_nodes) + " nodes");
    auto parent = t.parent_of(1);
    for (int i = 1; i <= t.num_nodes; ++i)
        if (parent[size_t(i)] == -1)
            fail(ErrorKind::mismatch, "decomposition tree is disconnected at node " + std::to_string(i));

    for (int i = 1; i <= t.num_nodes; ++i)
        for (int v : t.bags[size_t(i)])
            if (v < 1 || v > g.n)
                fail(ErrorKind::mismatch, "bag " + std::to_string(i) + " mentions unknown vertex " +
                                              std::to_string(v));

    // (i) every vertex covered
    std::vector<char> seen(size_t(g.n) + 1, 0);
    for (int i = 1; i <= t.num_nodes; ++i)
        for (int v : t.bags[size_t(i)]) seen[size_t(v)] = 1;
    for (int v = 1; v <= g.n; ++v)
        if (!seen[size_t(v)])
            fail(ErrorKind::mismatch, "vertex " + std::to_string(v) + " is in no bag");

    // (ii) every edge inside some bag
    for (auto &[u, v] : g.edges) {
        bool ok = false;
        for (int i = 1; i <= t.num_nodes && !ok; ++i) {
            const auto &b = t.bags[size_t(i)];
            ok = std::binary_search(b.begin(), b.end(), u) &&
                 std::binary_search(b.begin(), b.end(), v);
        }
        if (!ok)
            fail(ErrorKind::mismatch, "edge {" + std::to_string(u) + "," + std::to_string(v) +
                                          "} is covered by no bag");
    }

    // (iii) occurrence sets connected
    std::vector<std::vector<int>> occ(size_t(g.n) + 1);
    for (int i = 1; i <= t.num_nodes; ++i)
        for (int v : t.bags[size_t(i)]) occ[size_t(v)].push_back(i);
    for (int v = 1; v <= g.n; ++v) {
        const auto &o = occ[size_t(v)];
        // count nodes in o whose parent is also in o: connectivity in a tree
        // holds iff exactly |o|-1 members have their parent inside o
        std::vector<char> ino(size_t(t.num_nodes) + 1, 0);
        for (int i : o) ino[size_t(i)] = 1;
        int with_parent = 0;
        for (int i : o)
            if (parent[size_t(i)] > 0 && ino[size_t(parent[size_t(i)])]) ++with_parent;
        if (with_parent != int(o.size()) - 1)
            fail(ErrorKind::mismatch, "occurrence set of vertex " + std::to_string(v) +
                                          " is disconnected in the decomposition tree");
    }

    // (iv) special flag: occurrences totally ordered by the ancestor relation
    if (t.special) {
        std::vector<int> depth(size_t(t.num_nodes) + 1, 0);
        for (int i = 1; i <= t.num_nodes; ++i) {
            int d = 0, x = i;
            while (parent[size_t(x)] > 0) {
                x = parent[size_t(x)];
                ++d;
            }
            depth[size_t(i)] = d;
        }
        for (int v = 1; v <= g.n; ++v) {
            const auto &o = occ[size_t(v)];
            if (o.empty()) continue;
            int deepest = o[0];
            for (int i : o)
                if (depth[size_t(i)] > depth[size_t(deepest)]) deepest = i;
            std::vector<char> anc(size_t(t.num_nodes) + 1, 0);
            int x = deepest;
            anc[size_t(x)] = 1;
            while (parent[size_t(x)] > 0) {
                x = parent[size_t(x)];
                anc[size_t(x)] = 1;
            }
            for (int i : o)
                if (!anc[size_t(i)])
                    fail(ErrorKind::mismatch,
                         "special flag violated: occurrences of vertex " + std::to_string(v) +
                             " leave the leaf-root path through node " + std::to_string(deepest));
        }
    }
    return t.width();
}

bool is_special_td(const Graph &g, const TreeDecomposition &t, std::string *why) {
    TreeDecomposition probe = t;
    probe.special = true;
    try {
        validate_td(g, probe);
        return true;
    } catch (const Error &e) {
        if (why) *why = e.what();
        return false;
    }
}

TreeDecomposition parse_td(std::istream &in) {
    std::string line;
    int line_no = 0;
    TreeDecomposition t;
    bool header = false;
    int declared_bags = 0;
    bool special = false;
    std::vector<std::pair<int, int>> edges;
    std::vector<std::pair<int, std::vector<int>>> bags;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "c") {
            std::string kind;
            if (ls >> kind && kind == "special") special = true;
            continue;
        }
        if (tok == "s") {
            std::string fmt;
            int nb, w1, nv;
            if (header || !(ls >> fmt >> nb >> w1 >> nv) || fmt != "td")
                fail(ErrorKind::parse, "line " + std::to_string(line_no) + ": malformed .td header");
            declared_bags = nb;
            header = true;
            continue;
        }
        if (!header) fail(ErrorKind::parse, "content before .td header");
        if (tok == "b") {
            int id;
            if (!(ls >> id)) fail(ErrorKind::parse, "line " + std::to_string(line_no) + ": bag without id");
            std::vector<int> bag;
            int v;
            while (ls >> v) bag.push_back(v);
            bags.emplace_back(id, std::move(bag));
            continue;
        }
        int a = std::stoi(tok), b;
        if (!(ls >> b)) fail(ErrorKind::parse, "line " + std::to_string(line_no) + ": missing edge endpoint");
        edges.emplace_back(a, b);
    }
    if (!header) fail(ErrorKind::parse, "missing .td header");
    if (int(bags.size()) != declared_bags)
        fail(ErrorKind::parse, "header declares " + std::to_string(declared_bags) +
                                   " bags but file contains " + std::to_string(bags.size()));
    t = TreeDecomposition(declared_bags);
    for (auto &[id, bag] : bags) {
        if (id < 1 || id > declared_bags)
            fail(ErrorKind::parse, "bag id " + std::to_string(id) + " out of range");
        auto sorted = bag;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        t.bags[size_t(id)] = std::move(sorted);
    }
    for (auto &[a, b] : edges) t.add_edge(a, b);
    t.special = special;
    return t;
}

TreeDecomposition parse_td_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::io, "cannot open " + path);
    return parse_td(in);
}

void write_td(const TreeDecomposition &t, std::ostream &out) {
    int nv = 0;
    size_t maxbag = 0;
    for (int i = 1; i <= t.num_nodes; ++i) {
        maxbag = std::max(maxbag, t.bags[size_t(i)].size());
        for (int v : t.bags[size_t(i)]) nv = std::max(nv, v);
    }
    out << "s td " << t.num_nodes << ' ' << maxbag << ' ' << nv << '\n';
    if (t.special) out << "c special\n";
    for (int i = 1; i <= t.num_nodes; ++i) {
        out << "b " << i;
        for (int v : t.bags[size_t(i)]) out << ' ' << v;
        out << '\n';
    }
    for (auto &[a, b] : t.edges) out << a << ' ' << b << '\n';
}

void write_td_file(const TreeDecomposition &t, const std::string &path) {
    std::ofstream out(path);
    if (!out) fail(ErrorKind::io, "cannot open " + path + " for writing");
    write_td(t, out);
}

} // namespace widthforge
