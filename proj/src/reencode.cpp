#include "widthforge/reencode.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "widthforge/treewidth.hpp"

namespace widthforge {

namespace {

// ------------------------------------------------------- dnnf_to_cnf -------

struct NodeGates {
    std::vector<int> ors;                    // or-gate ids, sorted
    std::vector<std::pair<int, int>> ands;   // distinct (left,right) input pairs
    std::map<std::pair<int, int>, int> and_index;
    std::vector<std::vector<int>> or_members; // per or: indices into `ands`
};

struct GuessLayout {
    // per vtree node: variable ids of the or-index bits and and-index bits
    std::vector<std::vector<Var>> or_bits, and_bits;
    std::vector<Var> leaf_var; // encoding variable carrying the leaf's input
    int k = 1;
};

// appends the clause forbidding `value` on exactly the variables in `bits`
void forbid_code(CnfFormula &f, const std::vector<Var> &bits, std::uint32_t value) {
    std::vector<Lit> lits;
    for (size_t i = 0; i < bits.size(); ++i)
        lits.push_back(((value >> i) & 1) ? -bits[i] : bits[i]);
    f.add_clause(std::move(lits));
}

// appends clauses: (bits == value) -> lit, one clause per target literal
void imply_lit(CnfFormula &f, const std::vector<Var> &bits, std::uint32_t value, Lit target) {
    std::vector<Lit> lits;
    for (size_t i = 0; i < bits.size(); ++i)
        lits.push_back(((value >> i) & 1) ? -bits[i] : bits[i]);
    lits.push_back(target);
    f.add_clause(std::move(lits));
}

EncodingResult trivial_encoding(const StructuredDnnf &d) {
    EncodingResult out;
    auto vars = d.variables();
    out.formula.set_num_vars(int(vars.size()));
    for (size_t i = 0; i < vars.size(); ++i)
        out.formula.var_names[i + 1] = "x" + std::to_string(vars[i]);
    if (d.trivial == StructuredDnnf::Trivial::const_false) out.formula.add_clause({});
    if (d.trivial == StructuredDnnf::Trivial::none) {
        // single literal gate circuit
        Lit l = d.gates[size_t(d.output)].lit;
        out.formula.add_clause({lit_positive(l) ? 1 : -1});
    }
    TreeDecomposition td;
    int prev = 0;
    for (int v = 1; v <= out.formula.num_vars; ++v) {
        int node = td.add_node({v});
        if (prev) td.add_edge(prev, node);
        prev = node;
    }
    if (out.formula.num_vars == 0) td.add_node({});
    td.special = true;
    out.td_witness = td;
    out.special_witness = td;
    int prev_block = -1;
    for (int v = 1; v <= out.formula.num_vars; ++v)
        prev_block = out.blocks.add({}, {v}, prev_block);
    if (out.formula.num_vars == 0) out.blocks.add({}, {}, -1);
    out.dependent = true; // no auxiliary variables at all
    out.source_width = 1;
    return out;
}

} // namespace

EncodingResult dnnf_to_cnf(const StructuredDnnf &d0) {
    if (d0.is_trivial()) return trivial_encoding(d0);
    validate_dnnf(d0);
    StructuredDnnf d = reduce(d0);
    d.det = d0.det;
    if (d.gates[size_t(d.output)].kind == GateKind::literal) return trivial_encoding(d);
    if (d.gates[size_t(d.output)].kind == GateKind::and_gate) {
        // wrap so the root choice is an or-gate like everywhere else
        StructuredDnnf::Gate o;
        o.kind = GateKind::or_gate;
        o.vnode = d.gates[size_t(d.output)].vnode;
        o.inputs = {d.output};
        d.output = int(d.gates.size());
        d.gates.push_back(std::move(o));
    }

    int nv = d.vtree.num_nodes();
    std::vector<NodeGates> ng(static_cast<size_t>(nv));
    std::vector<std::map<Lit, int>> leaf_lit(static_cast<size_t>(nv)); // literal gate id per leaf
    for (int g = 0; g < int(d.gates.size()); ++g) {
        const auto &gate = d.gates[size_t(g)];
        if (gate.kind == GateKind::or_gate) ng[size_t(gate.vnode)].ors.push_back(g);
        else if (gate.kind == GateKind::literal) leaf_lit[size_t(gate.vnode)][gate.lit] = g;
    }
    int k = 1;
    for (auto &n : ng) {
        std::sort(n.ors.begin(), n.ors.end());
        k = std::max(k, int(n.ors.size()));
    }
    // and-pair normalization: distinct (left,right) pairs per node, where the
    // pair is ordered (left child gate, right child gate)
    for (int t = 0; t < nv; ++t) {
        auto &n = ng[size_t(t)];
        if (d.vtree.is_leaf(t)) continue;
        int left = d.vtree.nodes[size_t(t)].left;
        n.or_members.resize(n.ors.size());
        for (size_t oi = 0; oi < n.ors.size(); ++oi) {
            for (int ai : d.gates[size_t(n.ors[oi])].inputs) {
                const auto &ag = d.gates[size_t(ai)];
                int g1 = ag.inputs[0], g2 = ag.inputs[1];
                if (d.gates[size_t(g1)].vnode != left) std::swap(g1, g2);
                auto key = std::make_pair(g1, g2);
                auto it = n.and_index.find(key);
                int idx;
                if (it == n.and_index.end()) {
                    idx = int(n.ands.size());
                    n.and_index[key] = idx;
                    n.ands.push_back(key);
                } else {
                    idx = it->second;
                }
                n.or_members[oi].push_back(idx);
            }
        }
    }

    // variable layout: inputs first (ascending original id), then guess bits
    auto dvars = d.vtree.vars();
    EncodingResult out;
    CnfFormula &f = out.formula;
    std::map<Var, Var> var_of; // original -> new id
    std::vector<std::string> names;
    std::vector<bool> auxflag;
    auto alloc = [&](const std::string &name, bool aux) {
        names.push_back(name);
        auxflag.push_back(aux);
        return int(names.size());
    };
    for (Var v : dvars) var_of[v] = alloc("x" + std::to_string(v), false);

    GuessLayout lay;
    lay.k = k;
    lay.or_bits.assign(size_t(nv), {});
    lay.and_bits.assign(size_t(nv), {});
    lay.leaf_var.assign(size_t(nv), 0);
    for (int t = 0; t < nv; ++t) {
        if (d.vtree.is_leaf(t)) {
            lay.leaf_var[size_t(t)] = var_of[d.vtree.nodes[size_t(t)].var];
            continue;
        }
        int ob = ceil_log2(std::uint64_t(ng[size_t(t)].ors.size()));
        int ab = ceil_log2(std::uint64_t(ng[size_t(t)].ands.size()));
        for (int i = 0; i < ob; ++i)
            lay.or_bits[size_t(t)].push_back(alloc("o" + std::to_string(t) + "_" + std::to_string(i), true));
        for (int i = 0; i < ab; ++i)
            lay.and_bits[size_t(t)].push_back(alloc("a" + std::to_string(t) + "_" + std::to_string(i), true));
    }
    f.set_num_vars(int(names.size()));
    for (size_t i = 0; i < names.size(); ++i) {
        f.var_names[i + 1] = names[i];
        if (auxflag[i]) f.mark_aux(int(i) + 1);
    }

    // clauses
    std::vector<int> or_gate_index(d.gates.size(), -1);
    for (int t = 0; t < nv; ++t)
        for (size_t oi = 0; oi < ng[size_t(t)].ors.size(); ++oi)
            or_gate_index[size_t(ng[size_t(t)].ors[oi])] = int(oi);
    for (int t = 0; t < nv; ++t) {
        if (d.vtree.is_leaf(t)) continue;
        const auto &n = ng[size_t(t)];
        const auto &obits = lay.or_bits[size_t(t)];
        const auto &abits = lay.and_bits[size_t(t)];
        // out-of-range codewords
        for (std::uint32_t c = std::uint32_t(n.ors.size()); c < (std::uint32_t(1) << obits.size()); ++c)
            forbid_code(f, obits, c);
        for (std::uint32_t c = std::uint32_t(n.ands.size()); c < (std::uint32_t(1) << abits.size()); ++c)
            forbid_code(f, abits, c);
        // or/and consistency: forbid pairs where the and is not an input of the or
        std::vector<std::vector<char>> valid(n.ors.size(), std::vector<char>(n.ands.size(), 0));
        for (size_t oi = 0; oi < n.ors.size(); ++oi)
            for (int ai : n.or_members[oi]) valid[oi][size_t(ai)] = 1;
        for (std::uint32_t oi = 0; oi < n.ors.size(); ++oi)
            for (std::uint32_t ai = 0; ai < n.ands.size(); ++ai) {
                if (valid[oi][ai]) continue;
                std::vector<Lit> lits;
                for (size_t i = 0; i < obits.size(); ++i)
                    lits.push_back(((oi >> i) & 1) ? -obits[i] : obits[i]);
                for (size_t i = 0; i < abits.size(); ++i)
                    lits.push_back(((ai >> i) & 1) ? -abits[i] : abits[i]);
                f.add_clause(std::move(lits));
            }
        // child links: the chosen and fixes the child's or-code / leaf literal
        int left = d.vtree.nodes[size_t(t)].left, right = d.vtree.nodes[size_t(t)].right;
        for (std::uint32_t ai = 0; ai < n.ands.size(); ++ai) {
            auto [g1, g2] = n.ands[ai];
            for (int side = 0; side < 2; ++side) {
                int child = side == 0 ? left : right;
                int g = side == 0 ? g1 : g2;
                if (d.vtree.is_leaf(child)) {
                    Lit l = d.gates[size_t(g)].lit;
                    Var nvar = lay.leaf_var[size_t(child)];
                    imply_lit(f, abits, ai, lit_positive(l) ? nvar : -nvar);
                } else {
                    int o = or_gate_index[size_t(g)];
                    const auto &cbits = lay.or_bits[size_t(child)];
                    for (size_t i = 0; i < cbits.size(); ++i)
                        imply_lit(f, abits, ai, ((o >> i) & 1) ? cbits[i] : -cbits[i]);
                }
            }
        }
    }
    // force the root's or-choice to the output gate
    {
        int rt = d.vtree.root;
        int o = or_gate_index[size_t(d.output)];
        const auto &obits = lay.or_bits[size_t(rt)];
        for (size_t i = 0; i < obits.size(); ++i)
            f.add_clause({((o >> i) & 1) ? obits[i] : -obits[i]});
    }

    // decomposition witness over the v-tree (root must become node 1)
    std::vector<int> td_id(size_t(nv), 0);
    TreeDecomposition td;
    {
        std::vector<int> bfs{d.vtree.root};
        for (size_t i = 0; i < bfs.size(); ++i) {
            int t = bfs[i];
            std::vector<int> bag = lay.or_bits[size_t(t)];
            bag.insert(bag.end(), lay.and_bits[size_t(t)].begin(), lay.and_bits[size_t(t)].end());
            if (d.vtree.is_leaf(t)) {
                bag.push_back(lay.leaf_var[size_t(t)]);
            } else {
                int l = d.vtree.nodes[size_t(t)].left, r = d.vtree.nodes[size_t(t)].right;
                for (int c : {l, r}) {
                    if (d.vtree.is_leaf(c)) bag.push_back(lay.leaf_var[size_t(c)]);
                    for (Var v : lay.or_bits[size_t(c)]) bag.push_back(v);
                    for (Var v : lay.and_bits[size_t(c)]) bag.push_back(v);
                }
                bfs.push_back(l);
                bfs.push_back(r);
            }
            td_id[size_t(t)] = td.add_node(std::move(bag));
        }
        for (int t = 0; t < nv; ++t)
            if (!d.vtree.is_leaf(t)) {
                td.add_edge(td_id[size_t(t)], td_id[size_t(d.vtree.nodes[size_t(t)].left)]);
                td.add_edge(td_id[size_t(t)], td_id[size_t(d.vtree.nodes[size_t(t)].right)]);
            }
        td.special = true;
    }
    out.td_witness = td;
    out.special_witness = td;

    // block tree mirrors the v-tree
    {
        std::vector<int> block_id(size_t(nv), -1);
        std::vector<int> bfs{d.vtree.root};
        for (size_t i = 0; i < bfs.size(); ++i) {
            int t = bfs[i];
            int parent = block_id[size_t(t)]; // temporarily holds parent id
            std::vector<Var> aux = lay.or_bits[size_t(t)];
            aux.insert(aux.end(), lay.and_bits[size_t(t)].begin(), lay.and_bits[size_t(t)].end());
            std::vector<Var> ins;
            if (d.vtree.is_leaf(t)) ins.push_back(lay.leaf_var[size_t(t)]);
            int id = out.blocks.add(std::move(aux), std::move(ins), parent);
            block_id[size_t(t)] = id;
            if (!d.vtree.is_leaf(t)) {
                int l = d.vtree.nodes[size_t(t)].left, r = d.vtree.nodes[size_t(t)].right;
                block_id[size_t(l)] = id; // parent marker for the child visit
                block_id[size_t(r)] = id;
                bfs.push_back(l);
                bfs.push_back(r);
            }
        }
    }
    out.dependent = d.det == StructuredDnnf::Determinism::verified;
    out.source_width = k;
    return out;
}

EncodingResult dnnf_to_scw(const StructuredDnnf &d) {
    EncodingResult out = dnnf_to_cnf(d);
    CwExpression expr = special_td_to_scw(out.formula, *out.special_witness);
    validate_expression(expr, signed_incidence_graph(out.formula));
    out.scw_witness = std::move(expr);
    return out;
}

// -------------------------------------------------------- cliquegood -------

namespace {

// working tree: binarized decomposition with at most one clause per node
struct GroupNode {
    std::vector<int> bag;
    std::vector<int> children;
    int parent = -1;
    int clause = -1; // index into f.clauses, injective by construction
    int eta = 0;     // 4-coloring of the tree
};

struct GroupTree {
    std::vector<GroupNode> nodes;
    int root = 0;

    int add(std::vector<int> bag, int clause) {
        nodes.push_back({std::move(bag), {}, -1, clause, 0});
        return int(nodes.size()) - 1;
    }
    void link(int parent, int child) {
        nodes[size_t(child)].parent = parent;
        nodes[size_t(parent)].children.push_back(child);
    }
};

// binarize + attach one clause per (possibly duplicated) node
GroupTree build_group_tree(const CnfFormula &f, const TreeDecomposition &t) {
    auto children = t.children_of(1);
    // lambda: lowest node id whose bag covers the clause
    std::vector<std::vector<int>> clauses_of(size_t(t.num_nodes) + 1);
    for (size_t ci = 0; ci < f.clauses.size(); ++ci) {
        if (f.clauses[ci].tautological) continue;
        int home = 0;
        for (int node = 1; node <= t.num_nodes && !home; ++node) {
            const auto &bag = t.bags[size_t(node)];
            bool inside = true;
            for (Lit l : f.clauses[ci].lits)
                inside = inside && std::binary_search(bag.begin(), bag.end(), lit_var(l));
            if (inside) home = node;
        }
        if (!home)
            fail(ErrorKind::invalid, "clause " + std::to_string(ci + 1) +
                                         " is not covered by any bag of the decomposition");
        clauses_of[size_t(home)].push_back(int(ci));
    }
    GroupTree g;
    // recursive construction; returns the top work-node of the subtree
    std::function<int(int)> build = [&](int tn) -> int {
        const auto &bag = t.bags[size_t(tn)];
        // children pair-chained to keep the tree binary
        std::vector<int> subs;
        for (int c : children[size_t(tn)]) subs.push_back(build(c));
        int acc = -1;
        if (subs.empty()) {
            acc = g.add(bag, -1);
        } else if (subs.size() <= 2) {
            acc = g.add(bag, -1);
            for (int s : subs) g.link(acc, s);
        } else {
            acc = g.add(bag, -1);
            g.link(acc, subs[0]);
            int cur = acc;
            for (size_t i = 1; i < subs.size(); ++i) {
                if (i + 1 == subs.size()) {
                    g.link(cur, subs[i]);
                } else {
                    int chain = g.add(bag, -1);
                    g.link(cur, chain);
                    g.link(cur, subs[i]);
                    cur = chain;
                }
            }
        }
        // one copy per clause assigned here
        for (int ci : clauses_of[size_t(tn)]) {
            int copy = g.add(bag, ci);
            g.link(copy, acc);
            acc = copy;
        }
        return acc;
    };
    g.root = build(1);
    // 4-coloring: each node differs from its parent, children and siblings
    std::vector<int> order{g.root};
    for (size_t i = 0; i < order.size(); ++i)
        for (int c : g.nodes[size_t(order[i])].children) order.push_back(c);
    for (int v : order) {
        auto &n = g.nodes[size_t(v)];
        std::vector<char> used(5, 0);
        if (n.parent >= 0) {
            used[size_t(g.nodes[size_t(n.parent)].eta)] = 1;
            if (g.nodes[size_t(n.parent)].parent >= 0)
                used[size_t(g.nodes[size_t(g.nodes[size_t(n.parent)].parent)].eta)] = 1;
            for (int sib : g.nodes[size_t(n.parent)].children)
                if (sib != v && g.nodes[size_t(sib)].eta) used[size_t(g.nodes[size_t(sib)].eta)] = 1;
        }
        int c = 1;
        while (used[size_t(c)]) ++c;
        n.eta = c;
    }
    return g;
}

} // namespace

EncodingResult cliquegood(const CnfFormula &f, const TreeDecomposition &t) {
    if (f.num_vars < 2) fail(ErrorKind::invalid, "grouping construction needs at least 2 variables");
    Graph primal = primal_graph(f);
    validate_td(primal, t);
    int group = ceil_log2(std::uint64_t(f.num_vars)); // variables per color per bag
    int maxbag = t.width() + 1;
    int k = std::max(1, (maxbag + group - 1) / group);
    if (t.width() > k * group)
        fail(ErrorKind::invalid, "decomposition width exceeds k*ceil(log2 n)");
    int colors = k + 1;

    GroupTree g = build_group_tree(f, t);
    int wn = int(g.nodes.size());

    // color the variables: at most `group` per color per bag, fixed at the
    // topmost occurrence and inherited downward
    std::vector<int> color(size_t(f.num_vars) + 1, 0);
    std::vector<int> order{g.root};
    for (size_t i = 0; i < order.size(); ++i)
        for (int c : g.nodes[size_t(order[i])].children) order.push_back(c);
    for (int v : order) {
        auto &n = g.nodes[size_t(v)];
        std::vector<int> load(size_t(colors) + 1, 0);
        for (int x : n.bag)
            if (color[size_t(x)]) ++load[size_t(color[size_t(x)])];
        for (int x : n.bag) {
            if (color[size_t(x)]) continue;
            int c = 1;
            while (c <= colors && load[size_t(c)] >= group) ++c;
            if (c > colors)
                fail(ErrorKind::invalid, "internal: bag does not fit k+1 color classes");
            color[size_t(x)] = c;
            ++load[size_t(c)];
        }
    }
    // topmost occurrence of every variable (the copy that keeps the identity)
    std::vector<int> top_node(size_t(f.num_vars) + 1, -1);
    for (int v : order)
        for (int x : g.nodes[size_t(v)].bag)
            if (top_node[size_t(x)] == -1) top_node[size_t(x)] = v;

    // allocate F' variables: renamed representatives first (in F id order)
    EncodingResult out;
    CnfFormula &nf = out.formula;
    std::vector<std::string> names;
    std::vector<bool> auxflag;
    auto alloc = [&](const std::string &name, bool aux) {
        names.push_back(name);
        auxflag.push_back(aux);
        return int(names.size());
    };
    std::vector<std::vector<Var>> copy_at(static_cast<size_t>(wn)); // aligned with bag order
    std::map<std::pair<int, int>, Var> copy_id;        // (node, original var)
    for (Var x = 1; x <= f.num_vars; ++x)
        copy_id[{top_node[size_t(x)], x}] = alloc(f.var_name(x), f.is_aux[size_t(x)]);
    for (int v = 0; v < wn; ++v)
        for (int x : g.nodes[size_t(v)].bag) {
            auto key = std::make_pair(v, x);
            if (!copy_id.count(key))
                copy_id[key] = alloc(f.var_name(x) + "_n" + std::to_string(v), true);
            copy_at[size_t(v)].push_back(copy_id[key]);
        }
    std::map<std::pair<int, int>, Var> selector; // (node, color) -> y var
    for (int v = 0; v < wn; ++v) {
        if (g.nodes[size_t(v)].clause < 0) continue;
        for (int i = 1; i <= colors; ++i)
            selector[{v, i}] = alloc("y" + std::to_string(g.nodes[size_t(v)].clause + 1) + "_" +
                                         std::to_string(i),
                                     true);
    }
    nf.set_num_vars(int(names.size()));
    for (size_t i = 0; i < names.size(); ++i) {
        nf.var_names[i + 1] = names[i];
        if (auxflag[i]) nf.mark_aux(int(i) + 1);
    }

    // clause emission, recording [first,last) clause index ranges per block
    struct BlockRange {
        int first = 0, last = 0;
    };
    std::map<std::tuple<int, int, int>, BlockRange> eq_range;  // (child, parent, color)
    std::map<std::pair<int, int>, BlockRange> sel_range;       // (node, color)
    std::map<int, int> cprime_clause;                          // node -> clause index

    auto color_copies = [&](int v, int i) {
        std::vector<std::pair<Var, Var>> xs; // (original, copy)
        const auto &bag = g.nodes[size_t(v)].bag;
        for (size_t j = 0; j < bag.size(); ++j)
            if (color[size_t(bag[j])] == i) xs.emplace_back(bag[j], copy_at[size_t(v)][j]);
        return xs;
    };

    for (int v = 0; v < wn; ++v) {
        int p = g.nodes[size_t(v)].parent;
        if (p < 0) continue;
        for (int i = 1; i <= colors; ++i) {
            auto cs = color_copies(v, i), ps = color_copies(p, i);
            // truth-table block over the union forcing shared pairs equal
            std::vector<Var> u;
            std::vector<std::pair<int, int>> shared; // positions in u
            for (auto &[x, id] : cs) u.push_back(id);
            for (auto &[x, id] : ps) u.push_back(id);
            for (size_t a = 0; a < cs.size(); ++a)
                for (size_t b = 0; b < ps.size(); ++b)
                    if (cs[a].first == ps[b].first) shared.emplace_back(int(a), int(cs.size() + b));
            BlockRange r;
            r.first = int(nf.clauses.size());
            if (!shared.empty()) {
                for (std::uint32_t m = 0; m < (std::uint32_t(1) << u.size()); ++m) {
                    bool ok = true;
                    for (auto &[a, b] : shared)
                        ok = ok && (((m >> a) & 1) == ((m >> b) & 1));
                    if (ok) continue;
                    std::vector<Lit> lits;
                    for (size_t j = 0; j < u.size(); ++j)
                        lits.push_back(((m >> j) & 1) ? -u[j] : u[j]);
                    nf.add_clause(std::move(lits));
                }
            }
            r.last = int(nf.clauses.size());
            eq_range[{v, p, i}] = r;
        }
    }
    for (int v = 0; v < wn; ++v) {
        int ci = g.nodes[size_t(v)].clause;
        if (ci < 0) continue;
        const Clause &c = f.clauses[size_t(ci)];
        for (int i = 1; i <= colors; ++i) {
            auto cs = color_copies(v, i);
            Var y = selector[{v, i}];
            BlockRange r;
            r.first = int(nf.clauses.size());
            for (std::uint32_t m = 0; m < (std::uint32_t(1) << cs.size()); ++m) {
                bool sat = false;
                for (size_t j = 0; j < cs.size(); ++j) {
                    bool val = (m >> j) & 1;
                    if (c.contains(val ? cs[j].first : -cs[j].first)) sat = true;
                }
                // forbid the wrong selector value under this assignment
                std::vector<Lit> lits;
                for (size_t j = 0; j < cs.size(); ++j)
                    lits.push_back(((m >> j) & 1) ? -cs[j].second : cs[j].second);
                lits.push_back(sat ? y : -y);
                nf.add_clause(std::move(lits));
            }
            r.last = int(nf.clauses.size());
            sel_range[{v, i}] = r;
        }
        std::vector<Lit> big;
        for (int i = 1; i <= colors; ++i) big.push_back(selector[{v, i}]);
        cprime_clause[v] = int(nf.clauses.size());
        nf.add_clause(std::move(big));
    }

    // block tree for semantic verification
    {
        std::vector<int> block_of(size_t(wn), -1);
        for (int v : order) {
            std::vector<Var> aux, ins;
            const auto &bag = g.nodes[size_t(v)].bag;
            for (size_t j = 0; j < bag.size(); ++j) {
                Var id = copy_at[size_t(v)][j];
                if (top_node[size_t(bag[j])] == v && !f.is_aux[size_t(bag[j])]) ins.push_back(id);
                else aux.push_back(id);
            }
            if (g.nodes[size_t(v)].clause >= 0)
                for (int i = 1; i <= colors; ++i) aux.push_back(selector[{v, i}]);
            int parent = g.nodes[size_t(v)].parent;
            block_of[size_t(v)] = out.blocks.add(aux, ins, parent < 0 ? -1 : block_of[size_t(parent)]);
        }
    }

    // modular treewidth witness: bags of class representatives over the
    // contracted incidence graph
    {
        Contraction con = module_contraction(incidence_graph(nf));
        auto rep_of_var = [&](Var x) { return con.new_id[size_t(x)]; };
        auto rep_of_clause = [&](int ci) { return con.new_id[size_t(nf.num_vars + ci + 1)]; };
        TreeDecomposition mtd;
        std::vector<int> mtd_id(size_t(wn), 0);
        for (int v : order) {
            std::vector<int> bag;
            for (Var id : copy_at[size_t(v)]) bag.push_back(rep_of_var(id));
            int p = g.nodes[size_t(v)].parent;
            if (p >= 0)
                for (int i = 1; i <= colors; ++i) {
                    auto r = eq_range[{v, p, i}];
                    for (int ci = r.first; ci < r.last; ++ci) bag.push_back(rep_of_clause(ci));
                }
            for (int c : g.nodes[size_t(v)].children)
                for (int i = 1; i <= colors; ++i) {
                    auto r = eq_range[{c, v, i}];
                    for (int ci = r.first; ci < r.last; ++ci) bag.push_back(rep_of_clause(ci));
                }
            if (g.nodes[size_t(v)].clause >= 0) {
                for (int i = 1; i <= colors; ++i) {
                    auto r = sel_range[{v, i}];
                    for (int ci = r.first; ci < r.last; ++ci) bag.push_back(rep_of_clause(ci));
                    bag.push_back(rep_of_var(selector[{v, i}]));
                }
                bag.push_back(rep_of_clause(cprime_clause[v]));
            }
            std::sort(bag.begin(), bag.end());
            bag.erase(std::unique(bag.begin(), bag.end()), bag.end());
            mtd_id[size_t(v)] = mtd.add_node(std::move(bag));
        }
        for (int v = 0; v < wn; ++v)
            if (g.nodes[size_t(v)].parent >= 0)
                mtd.add_edge(mtd_id[size_t(g.nodes[size_t(v)].parent)], mtd_id[size_t(v)]);
        // isolated representatives may merge across distant nodes; pin each
        // one to a single bag to keep occurrence sets connected
        {
            std::vector<char> isolated(size_t(con.graph.n) + 1, 0);
            for (int vv = 1; vv <= con.graph.n; ++vv)
                isolated[size_t(vv)] = con.graph.adj[size_t(vv)].empty();
            std::vector<char> placed(size_t(con.graph.n) + 1, 0);
            for (int b = 1; b <= mtd.num_nodes; ++b) {
                auto &bag = mtd.bags[size_t(b)];
                std::vector<int> keep;
                for (int vv : bag) {
                    if (!isolated[size_t(vv)]) keep.push_back(vv);
                    else if (!placed[size_t(vv)]) {
                        placed[size_t(vv)] = 1;
                        keep.push_back(vv);
                    }
                }
                bag = std::move(keep);
            }
        }
        validate_td(con.graph, mtd);
        out.mtw_witness = std::move(mtd);
    }

    // unsigned k-expression for the incidence graph of F'
    {
        CwExpression e;
        // label book-keeping: (i in [colors], eta in [4], role in {0,1,2})
        auto lab = [&](int i, int eta, int role) { return ((i - 1) * 4 + (eta - 1)) * 3 + role + 1; };
        int ypool = colors * 12;                       // + i
        int cprime_label = colors * 12 + colors + 1;
        int dummy = cprime_label + 1;
        std::function<bool(int)> emit = [&](int v) -> bool {
            const auto &node = g.nodes[size_t(v)];
            int eta = node.eta;
            bool have = false;
            // local part: clause selectors and variable copies
            const auto &bag = node.bag;
            for (size_t j = 0; j < bag.size(); ++j) {
                e.create(copy_at[size_t(v)][j], lab(color[size_t(bag[j])], eta, 1));
                if (have) e.unite();
                have = true;
            }
            if (node.clause >= 0) {
                for (int i = 1; i <= colors; ++i) {
                    auto r = sel_range[{v, i}];
                    for (int ci = r.first; ci < r.last; ++ci) {
                        e.create(nf.num_vars + ci + 1, lab(i, eta, 0));
                        if (have) e.unite();
                        have = true;
                    }
                    e.create(selector[{v, i}], ypool + i);
                    if (have) e.unite();
                    have = true;
                    e.join(ypool + i, lab(i, eta, 0));
                    e.join(lab(i, eta, 1), lab(i, eta, 0));
                }
                e.create(nf.num_vars + cprime_clause[v] + 1, cprime_label);
                if (have) e.unite();
                have = true;
                for (int i = 1; i <= colors; ++i) e.join(cprime_label, ypool + i);
                // retire the transient labels
                for (int i = 1; i <= colors; ++i) {
                    e.rename(lab(i, eta, 0), dummy);
                    e.rename(ypool + i, dummy);
                }
                e.rename(cprime_label, dummy);
            }
            // children plus their equality blocks
            for (int c : node.children) {
                bool have_child = emit(c);
                if (have && have_child) e.unite();
                have = have || have_child;
                int ceta = g.nodes[size_t(c)].eta;
                for (int i = 1; i <= colors; ++i) {
                    auto r = eq_range[{c, v, i}];
                    for (int ci = r.first; ci < r.last; ++ci) {
                        e.create(nf.num_vars + ci + 1, lab(i, eta, 2));
                        if (have) e.unite();
                        have = true;
                    }
                    if (r.first != r.last) {
                        e.join(lab(i, ceta, 1), lab(i, eta, 2));
                        e.join(lab(i, eta, 1), lab(i, eta, 2));
                        e.rename(lab(i, eta, 2), dummy);
                    }
                }
                for (int i = 1; i <= colors; ++i) e.rename(lab(i, ceta, 1), dummy);
            }
            return have;
        };
        emit(g.root);
        validate_expression(e, incidence_graph(nf));
        out.cw_witness = std::move(e);
    }

    out.source_width = k;
    out.dependent = true; // checked semantically by verify_encoding
    return out;
}

// ---------------------------------------------------- pipeline_reverse -----

EncodingResult pipeline_reverse(const CnfFormula &f, const TreeDecomposition &t,
                                DependentMode mode) {
    bool dependent_path = false;
    if (mode != DependentMode::plain && f.num_vars <= kBruteForceVarCap) {
        auto dep = has_dependent_aux(f);
        if (mode == DependentMode::require && !dep.ok) {
            std::string msg = "dependent path requested but the encoding has a free auxiliary variable";
            if (dep.witness) {
                msg += " (two models agree on the inputs";
                for (Var v : f.aux_vars())
                    if (dep.witness->first[v] != dep.witness->second[v]) {
                        msg += " and differ on " + f.var_name(v);
                        break;
                    }
                msg += ")";
            }
            fail(ErrorKind::invalid, msg);
        }
        dependent_path = dep.ok;
    } else if (mode == DependentMode::require) {
        dependent_path = true; // definability check will refuse if this is wrong
    }
    StructuredDnnf d = compile_cnf(f, t);
    d = reduce(d);
    if (!d.is_trivial() && d.num_vars() <= kBruteForceVarCap) d = with_verified_determinism(d);
    for (Var z : f.aux_vars()) {
        if (dependent_path && !d.is_trivial()) d = forget_preserving_determinism(d, z);
        else d = forget(reduce(d), z);
    }
    EncodingResult out = dnnf_to_cnf(d);
    return out;
}

// ----------------------------------------------------- verification --------

std::string verify_encoding(const EncodingResult &enc, const FunctionSpec &spec,
                            bool check_dependent) {
    try {
        if (enc.formula.num_vars <= kBruteForceVarCap) {
            auto chk = is_clausal_encoding(enc.formula, spec);
            if (!chk.ok) return "projection differs from the target function (brute force)";
            if (check_dependent) {
                auto dep = has_dependent_aux(enc.formula);
                if (!dep.ok) return "auxiliary variables are not dependent (brute force)";
            }
            return "";
        }
        if (enc.blocks.empty()) return "formula exceeds the oracle cap and carries no block tree";
        auto proj = project_via_blocks(enc.formula, enc.blocks);
        if (!(proj.projection.vars.size() == spec.vars.size()))
            return "projection variable count differs from the target";
        if (proj.projection.onset != spec.onset)
            return "projection differs from the target function (block DP)";
        if (check_dependent && !proj.unique_extension)
            return "auxiliary variables are not dependent (block DP)";
        return "";
    } catch (const Error &e) {
        return std::string("verification failed to run: ") + e.what();
    }
}

} // namespace widthforge
