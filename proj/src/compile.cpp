#include "widthforge/compile.hpp"

#include <algorithm>
#include <map>

#include "widthforge/treewidth.hpp"

namespace widthforge {

int NiceDecomposition::width() const {
    size_t mx = 1;
    for (const auto &n : nodes) mx = std::max(mx, n.bag.size());
    return int(mx) - 1;
}

namespace {

struct NiceBuilder {
    NiceDecomposition nice;

    int add(NiceDecomposition::Kind kind, int var, int c1, int c2, std::vector<int> bag) {
        std::sort(bag.begin(), bag.end());
        nice.nodes.push_back({kind, var, c1, c2, std::move(bag)});
        return int(nice.nodes.size()) - 1;
    }

    // morphs the child chain ending at `node` (with bag `from`) into bag `to`
    int morph(int node, std::vector<int> from, const std::vector<int> &to) {
        for (int v : std::vector<int>(from)) {
            if (!std::binary_search(to.begin(), to.end(), v)) {
                from.erase(std::find(from.begin(), from.end(), v));
                node = add(NiceDecomposition::Kind::forget, v, node, -1, from);
            }
        }
        for (int v : to) {
            if (!std::binary_search(from.begin(), from.end(), v)) {
                from.insert(std::lower_bound(from.begin(), from.end(), v), v);
                node = add(NiceDecomposition::Kind::introduce, v, node, -1, from);
            }
        }
        return node;
    }

    int build(const TreeDecomposition &t, const std::vector<std::vector<int>> &children, int tnode) {
        const auto &bag = t.bags[size_t(tnode)];
        int acc = -1;
        for (int c : children[size_t(tnode)]) {
            int sub = build(t, children, c);
            sub = morph(sub, t.bags[size_t(c)], bag);
            if (acc == -1) acc = sub;
            else acc = add(NiceDecomposition::Kind::join, 0, acc, sub, bag);
        }
        if (acc == -1) {
            acc = add(NiceDecomposition::Kind::leaf, 0, -1, -1, {});
            acc = morph(acc, {}, bag);
        }
        return acc;
    }
};

} // namespace

NiceDecomposition make_nice(const TreeDecomposition &t) {
    NiceBuilder b;
    auto children = t.children_of(1);
    int top = b.build(t, children, 1);
    top = b.morph(top, t.bags[1], {});
    b.nice.root = top;
    return b.nice;
}

namespace {

// Per-node compilation state: the viable bag assignments with provenance
// links for gate emission.
struct NiceState {
    // key: bag assignment packed by bag position (bit i = bag[i])
    std::vector<std::uint32_t> keys;              // sorted
    std::vector<int> link1, link2;                // semantics depend on node kind
    std::vector<int> link1b;                      // forget: state for var=1 branch
    std::vector<char> reach;                      // top-down reachable
    int vtnode = -1;                              // v-tree node rooted here (-1: none)
};

int key_index(const NiceState &st, std::uint32_t key) {
    auto it = std::lower_bound(st.keys.begin(), st.keys.end(), key);
    if (it == st.keys.end() || *it != key) return -1;
    return int(it - st.keys.begin());
}

struct Compiler {
    const CnfFormula &f;
    const NiceDecomposition &nice;
    std::vector<std::vector<int>> clauses_at; // nice node -> clause indices checked there
    std::vector<NiceState> states;
    VTree vtree;

    explicit Compiler(const CnfFormula &f_, const NiceDecomposition &nice_) : f(f_), nice(nice_) {
        assign_clauses();
    }

    void assign_clauses() {
        clauses_at.assign(nice.nodes.size(), {});
        std::vector<int> parent(nice.nodes.size(), -1);
        for (int i = 0; i < int(nice.nodes.size()); ++i) {
            const auto &n = nice.nodes[size_t(i)];
            if (n.child1 >= 0) parent[size_t(n.child1)] = i;
            if (n.child2 >= 0) parent[size_t(n.child2)] = i;
        }
        for (size_t ci = 0; ci < f.clauses.size(); ++ci) {
            const Clause &c = f.clauses[ci];
            if (c.tautological) continue;
            int home = -1;
            for (int i = 0; i < int(nice.nodes.size()); ++i) {
                if (!clause_inside(c, nice.nodes[size_t(i)].bag)) continue;
                bool parent_inside =
                    parent[size_t(i)] >= 0 &&
                    clause_inside(c, nice.nodes[size_t(parent[size_t(i)])].bag);
                if (!parent_inside) home = std::max(home, i); // topmost occurrence
            }
            if (home == -1)
                fail(ErrorKind::invalid, "clause " + std::to_string(ci + 1) +
                                             " is not covered by any bag of the decomposition");
            clauses_at[size_t(home)].push_back(int(ci));
        }
    }

    static bool clause_inside(const Clause &c, const std::vector<int> &bag) {
        for (Lit l : c.lits)
            if (!std::binary_search(bag.begin(), bag.end(), lit_var(l))) return false;
        return true;
    }

    bool key_satisfies(const Clause &c, const std::vector<int> &bag, std::uint32_t key) const {
        for (Lit l : c.lits) {
            auto it = std::lower_bound(bag.begin(), bag.end(), lit_var(l));
            bool v = (key >> (it - bag.begin())) & 1;
            if (v == lit_positive(l)) return true;
        }
        return false;
    }

    bool passes_checks(int node, std::uint32_t key) const {
        for (int ci : clauses_at[size_t(node)])
            if (!key_satisfies(f.clauses[size_t(ci)], nice.nodes[size_t(node)].bag, key))
                return false;
        return true;
    }

    // bottom-up viability pass
    void forward() {
        states.assign(nice.nodes.size(), {});
        for (int i = 0; i < int(nice.nodes.size()); ++i) {
            const auto &n = nice.nodes[size_t(i)];
            NiceState &st = states[size_t(i)];
            switch (n.kind) {
            case NiceDecomposition::Kind::leaf:
                if (passes_checks(i, 0)) st.keys.push_back(0);
                break;
            case NiceDecomposition::Kind::introduce: {
                const NiceState &ch = states[size_t(n.child1)];
                const auto &cbag = nice.nodes[size_t(n.child1)].bag;
                int vpos = int(std::lower_bound(n.bag.begin(), n.bag.end(), n.var) - n.bag.begin());
                std::uint32_t low = (std::uint32_t(1) << vpos) - 1;
                for (std::uint32_t ck : ch.keys) {
                    (void)cbag;
                    std::uint32_t spread = ((ck & ~low) << 1) | (ck & low);
                    for (std::uint32_t b = 0; b <= 1; ++b) {
                        std::uint32_t key = spread | (b << vpos);
                        if (passes_checks(i, key)) {
                            st.keys.push_back(key);
                            st.link1.push_back(key_index(ch, ck));
                        }
                    }
                }
                sort_by_key(st, true, false);
                break;
            }
            case NiceDecomposition::Kind::forget: {
                const NiceState &ch = states[size_t(n.child1)];
                const auto &cbag = nice.nodes[size_t(n.child1)].bag;
                int vpos = int(std::lower_bound(cbag.begin(), cbag.end(), n.var) - cbag.begin());
                std::uint32_t low = (std::uint32_t(1) << vpos) - 1;
                std::map<std::uint32_t, std::pair<int, int>> merged; // key -> (state b=0, b=1)
                for (int ci = 0; ci < int(ch.keys.size()); ++ci) {
                    std::uint32_t ck = ch.keys[size_t(ci)];
                    std::uint32_t key = ((ck >> 1) & ~low) | (ck & low);
                    bool b = (ck >> vpos) & 1;
                    auto &slot = merged.emplace(key, std::make_pair(-1, -1)).first->second;
                    (b ? slot.second : slot.first) = ci;
                }
                for (auto &[key, slot] : merged) {
                    if (!passes_checks(i, key)) continue;
                    st.keys.push_back(key);
                    st.link1.push_back(slot.first);
                    st.link1b.push_back(slot.second);
                }
                break;
            }
            case NiceDecomposition::Kind::join: {
                const NiceState &c1 = states[size_t(n.child1)];
                const NiceState &c2 = states[size_t(n.child2)];
                for (int i1 = 0; i1 < int(c1.keys.size()); ++i1) {
                    int i2 = key_index(c2, c1.keys[size_t(i1)]);
                    if (i2 < 0) continue;
                    if (!passes_checks(i, c1.keys[size_t(i1)])) continue;
                    st.keys.push_back(c1.keys[size_t(i1)]);
                    st.link1.push_back(i1);
                    st.link2.push_back(i2);
                }
                break;
            }
            }
        }
    }

    // keeps keys sorted with their parallel link arrays
    static void sort_by_key(NiceState &st, bool has1, bool has2) {
        std::vector<int> idx(st.keys.size());
        for (size_t i = 0; i < idx.size(); ++i) idx[i] = int(i);
        std::sort(idx.begin(), idx.end(),
                  [&](int a, int b) { return st.keys[size_t(a)] < st.keys[size_t(b)]; });
        NiceState ns;
        ns.vtnode = st.vtnode;
        for (int j : idx) {
            ns.keys.push_back(st.keys[size_t(j)]);
            if (has1) ns.link1.push_back(st.link1[size_t(j)]);
            if (has2) ns.link2.push_back(st.link2[size_t(j)]);
        }
        st = std::move(ns);
    }

    // top-down reachability from the root's empty state
    void backward() {
        for (auto &st : states) st.reach.assign(st.keys.size(), 0);
        NiceState &rt = states[size_t(nice.root)];
        for (auto &r : rt.reach) r = 1; // root has at most the empty key
        for (int i = int(nice.nodes.size()) - 1; i >= 0; --i) {
            const auto &n = nice.nodes[size_t(i)];
            const NiceState &st = states[size_t(i)];
            for (size_t si = 0; si < st.keys.size(); ++si) {
                if (!st.reach[si]) continue;
                switch (n.kind) {
                case NiceDecomposition::Kind::leaf: break;
                case NiceDecomposition::Kind::introduce:
                    states[size_t(n.child1)].reach[size_t(st.link1[si])] = 1;
                    break;
                case NiceDecomposition::Kind::forget:
                    if (st.link1[si] >= 0) states[size_t(n.child1)].reach[size_t(st.link1[si])] = 1;
                    if (st.link1b[si] >= 0) states[size_t(n.child1)].reach[size_t(st.link1b[si])] = 1;
                    break;
                case NiceDecomposition::Kind::join:
                    states[size_t(n.child1)].reach[size_t(st.link1[si])] = 1;
                    states[size_t(n.child2)].reach[size_t(st.link2[si])] = 1;
                    break;
                }
            }
        }
    }
};

// circuit hooks per (node, state): an or/literal gate or a literal choice
struct Hook {
    std::vector<int> options; // gate ids; singleton unless a literal choice
};

} // namespace

VTree td_to_vtree(const CnfFormula &f, const TreeDecomposition &t) {
    Graph primal = primal_graph(f);
    validate_td(primal, t);
    NiceDecomposition nice = make_nice(t);
    VTree vt;
    std::vector<int> sub(nice.nodes.size(), -1); // v-tree node per nice node
    for (int i = 0; i < int(nice.nodes.size()); ++i) {
        const auto &n = nice.nodes[size_t(i)];
        switch (n.kind) {
        case NiceDecomposition::Kind::leaf: break;
        case NiceDecomposition::Kind::introduce: sub[size_t(i)] = sub[size_t(n.child1)]; break;
        case NiceDecomposition::Kind::forget: {
            int leaf = vt.add_leaf(n.var);
            int below = sub[size_t(n.child1)];
            sub[size_t(i)] = below == -1 ? leaf : vt.add_internal(leaf, below);
            break;
        }
        case NiceDecomposition::Kind::join: {
            int a = sub[size_t(n.child1)], b = sub[size_t(n.child2)];
            sub[size_t(i)] = (a == -1) ? b : (b == -1 ? a : vt.add_internal(a, b));
            break;
        }
        }
    }
    vt.root = sub[size_t(nice.root)];
    if (vt.root == -1) fail(ErrorKind::invalid, "formula has no variables, no v-tree exists");
    vt.validate();
    return vt;
}

StructuredDnnf compile_cnf(const CnfFormula &f, const TreeDecomposition &t) {
    for (const Clause &c : f.clauses)
        if (c.lits.empty() && !c.tautological)
            return StructuredDnnf::make_trivial(StructuredDnnf::Trivial::const_false,
                                                f.num_vars ? [&] {
                                                    std::vector<Var> vs(static_cast<size_t>(f.num_vars));
                                                    for (int v = 1; v <= f.num_vars; ++v)
                                                        vs[size_t(v - 1)] = v;
                                                    return vs;
                                                }() : std::vector<Var>{});
    if (f.num_vars == 0)
        return StructuredDnnf::make_trivial(StructuredDnnf::Trivial::const_true, {});

    Graph primal = primal_graph(f);
    validate_td(primal, t);
    NiceDecomposition nice = make_nice(t);
    Compiler comp(f, nice);
    comp.forward();
    if (comp.states[size_t(nice.root)].keys.empty()) {
        std::vector<Var> vs(static_cast<size_t>(f.num_vars));
        for (int v = 1; v <= f.num_vars; ++v) vs[size_t(v - 1)] = v;
        return StructuredDnnf::make_trivial(StructuredDnnf::Trivial::const_false, vs);
    }
    comp.backward();

    StructuredDnnf d;
    std::vector<int> sub(nice.nodes.size(), -1);
    std::vector<std::vector<Hook>> hooks(nice.nodes.size());
    std::vector<std::map<Lit, int>> leaf_literals; // per v-tree leaf created below
    std::map<std::pair<int, Lit>, int> literal_gate; // (vtree leaf, lit) -> gate

    auto literal_at = [&](int vleaf, Lit l) {
        auto it = literal_gate.find({vleaf, l});
        if (it != literal_gate.end()) return it->second;
        StructuredDnnf::Gate g;
        g.kind = GateKind::literal;
        g.lit = l;
        g.vnode = vleaf;
        int id = int(d.gates.size());
        d.gates.push_back(g);
        literal_gate[{vleaf, l}] = id;
        return id;
    };

    for (int i = 0; i < int(nice.nodes.size()); ++i) {
        const auto &n = nice.nodes[size_t(i)];
        const NiceState &st = comp.states[size_t(i)];
        hooks[size_t(i)].assign(st.keys.size(), {});
        switch (n.kind) {
        case NiceDecomposition::Kind::leaf:
            break;
        case NiceDecomposition::Kind::introduce:
            sub[size_t(i)] = sub[size_t(n.child1)];
            for (size_t si = 0; si < st.keys.size(); ++si) {
                if (!st.reach[si]) continue;
                hooks[size_t(i)][si] = hooks[size_t(n.child1)][size_t(st.link1[si])];
            }
            break;
        case NiceDecomposition::Kind::forget: {
            int below = sub[size_t(n.child1)];
            int leaf = d.vtree.add_leaf(n.var);
            int here = below == -1 ? leaf : d.vtree.add_internal(leaf, below);
            sub[size_t(i)] = here;
            for (size_t si = 0; si < st.keys.size(); ++si) {
                if (!st.reach[si]) continue;
                Hook h;
                if (below == -1) {
                    // nothing forgotten below: the state is realized by bare literals
                    if (st.link1[si] >= 0) h.options.push_back(literal_at(leaf, -n.var));
                    if (st.link1b[si] >= 0) h.options.push_back(literal_at(leaf, n.var));
                } else {
                    std::vector<int> ands;
                    for (int b = 0; b <= 1; ++b) {
                        int ci = b ? st.link1b[si] : st.link1[si];
                        if (ci < 0) continue;
                        int lit = literal_at(leaf, b ? n.var : -n.var);
                        for (int opt : hooks[size_t(n.child1)][size_t(ci)].options) {
                            StructuredDnnf::Gate a;
                            a.kind = GateKind::and_gate;
                            a.vnode = here;
                            a.inputs = {lit, opt};
                            ands.push_back(int(d.gates.size()));
                            d.gates.push_back(std::move(a));
                        }
                    }
                    StructuredDnnf::Gate o;
                    o.kind = GateKind::or_gate;
                    o.vnode = here;
                    o.inputs = std::move(ands);
                    h.options.push_back(int(d.gates.size()));
                    d.gates.push_back(std::move(o));
                }
                hooks[size_t(i)][si] = std::move(h);
            }
            break;
        }
        case NiceDecomposition::Kind::join: {
            int a = sub[size_t(n.child1)], b = sub[size_t(n.child2)];
            if (a == -1 || b == -1) {
                sub[size_t(i)] = a == -1 ? b : a;
                int side = a == -1 ? n.child2 : n.child1;
                for (size_t si = 0; si < st.keys.size(); ++si) {
                    if (!st.reach[si]) continue;
                    int ci = a == -1 ? st.link2[si] : st.link1[si];
                    hooks[size_t(i)][si] = hooks[size_t(side)][size_t(ci)];
                }
                break;
            }
            int here = d.vtree.add_internal(a, b);
            sub[size_t(i)] = here;
            for (size_t si = 0; si < st.keys.size(); ++si) {
                if (!st.reach[si]) continue;
                std::vector<int> ands;
                for (int x : hooks[size_t(n.child1)][size_t(st.link1[si])].options)
                    for (int y : hooks[size_t(n.child2)][size_t(st.link2[si])].options) {
                        StructuredDnnf::Gate g;
                        g.kind = GateKind::and_gate;
                        g.vnode = here;
                        g.inputs = {x, y};
                        ands.push_back(int(d.gates.size()));
                        d.gates.push_back(std::move(g));
                    }
                StructuredDnnf::Gate o;
                o.kind = GateKind::or_gate;
                o.vnode = here;
                o.inputs = std::move(ands);
                Hook h;
                h.options.push_back(int(d.gates.size()));
                d.gates.push_back(std::move(o));
                hooks[size_t(i)][si] = std::move(h);
            }
            break;
        }
        }
    }

    d.vtree.root = sub[size_t(nice.root)];
    const Hook &top = hooks[size_t(nice.root)][0];
    if (top.options.size() == 1) {
        d.output = top.options[0];
    } else {
        // a one-variable formula satisfied by both values of its variable
        std::vector<Var> vs(static_cast<size_t>(f.num_vars));
        for (int v = 1; v <= f.num_vars; ++v) vs[size_t(v - 1)] = v;
        return StructuredDnnf::make_trivial(StructuredDnnf::Trivial::const_true, vs);
    }
    d.det = StructuredDnnf::Determinism::unknown;
    return d;
}

CompileLog compile_widths(const CnfFormula &f, StructuredDnnf *out, TreeDecomposition *td_out) {
    Graph primal = primal_graph(f);
    CompileLog log;
    TreeDecomposition td;
    if (primal.n <= kExactTreewidthCap) {
        auto [w, t] = exact_treewidth(primal);
        td = std::move(t);
        log.td_width = w;
        log.td_exact = true;
    } else {
        td = minfill_td(primal);
        log.td_width = td.width();
        log.td_exact = false;
    }
    StructuredDnnf d = compile_cnf(f, td);
    log.dnnf_width = dnnf_width(d);
    log.gate_count = d.gates.size();
    if (out) *out = std::move(d);
    if (td_out) *td_out = std::move(td);
    return log;
}

} // namespace widthforge
