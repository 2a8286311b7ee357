#include "widthforge/dnnf.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace widthforge {

// ---------------------------------------------------------------- VTree ----

int VTree::add_leaf(Var v) {
    nodes.push_back({-1, -1, v});
    return int(nodes.size()) - 1;
}

int VTree::add_internal(int left, int right) {
    nodes.push_back({left, right, 0});
    return int(nodes.size()) - 1;
}

std::vector<Var> VTree::vars() const {
    std::vector<Var> out;
    for (const Node &n : nodes)
        if (n.left == -1) out.push_back(n.var);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Var> VTree::vars_below(int id) const {
    std::vector<Var> out;
    std::vector<int> stack{id};
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        const Node &n = nodes[size_t(x)];
        if (n.left == -1) out.push_back(n.var);
        else {
            stack.push_back(n.left);
            stack.push_back(n.right);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

void VTree::validate() const {
    if (root < 0 || root >= int(nodes.size())) fail(ErrorKind::mismatch, "v-tree root out of range");
    std::vector<int> seen(nodes.size(), 0);
    std::vector<int> stack{root};
    int visited = 0;
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        if (x < 0 || x >= int(nodes.size())) fail(ErrorKind::mismatch, "v-tree child out of range");
        if (seen[size_t(x)]++) fail(ErrorKind::mismatch, "v-tree node visited twice (not a tree)");
        ++visited;
        const Node &n = nodes[size_t(x)];
        if ((n.left == -1) != (n.right == -1))
            fail(ErrorKind::mismatch, "v-tree node " + std::to_string(x) + " has exactly one child");
        if (n.left == -1) {
            if (n.var <= 0) fail(ErrorKind::mismatch, "v-tree leaf without a variable label");
        } else {
            stack.push_back(n.left);
            stack.push_back(n.right);
        }
    }
    if (visited != int(nodes.size()))
        fail(ErrorKind::mismatch, "v-tree has nodes unreachable from the root");
    auto vs = vars();
    if (std::adjacent_find(vs.begin(), vs.end()) != vs.end())
        fail(ErrorKind::mismatch, "v-tree leaf labels are not distinct");
}

// ----------------------------------------------------- StructuredDnnf ------

std::vector<Var> StructuredDnnf::variables() const {
    if (is_trivial()) {
        auto vs = trivial_vars;
        std::sort(vs.begin(), vs.end());
        return vs;
    }
    return vtree.vars();
}

StructuredDnnf StructuredDnnf::make_trivial(Trivial kind, std::vector<Var> vars) {
    StructuredDnnf d;
    d.trivial = kind;
    d.trivial_vars = std::move(vars);
    std::sort(d.trivial_vars.begin(), d.trivial_vars.end());
    d.det = Determinism::verified; // no or-gates at all
    return d;
}

namespace {

std::vector<int> topo_order(const StructuredDnnf &d) {
    std::vector<int> order;
    std::vector<int> state(d.gates.size(), 0);
    std::vector<int> stack;
    for (int g0 = 0; g0 < int(d.gates.size()); ++g0) {
        if (state[size_t(g0)]) continue;
        stack.push_back(g0);
        while (!stack.empty()) {
            int g = stack.back();
            if (state[size_t(g)] == 2) {
                stack.pop_back();
                continue;
            }
            if (state[size_t(g)] == 1) {
                state[size_t(g)] = 2;
                order.push_back(g);
                stack.pop_back();
                continue;
            }
            state[size_t(g)] = 1;
            for (int in : d.gates[size_t(g)].inputs) {
                if (in < 0 || in >= int(d.gates.size()))
                    fail(ErrorKind::mismatch, "gate " + std::to_string(g) + " has an input out of range");
                if (state[size_t(in)] == 1)
                    fail(ErrorKind::mismatch, "gate cycle through gate " + std::to_string(in));
                if (state[size_t(in)] == 0) stack.push_back(in);
            }
        }
    }
    return order;
}

} // namespace

int dnnf_width(const StructuredDnnf &d) {
    if (d.is_trivial()) return 0;
    std::vector<int> ors(d.vtree.nodes.size(), 0);
    int w = 0;
    for (const auto &g : d.gates)
        if (g.kind == GateKind::or_gate) w = std::max(w, ++ors[size_t(g.vnode)]);
    return w;
}

int validate_dnnf(const StructuredDnnf &d) {
    if (d.is_trivial()) return 0;
    d.vtree.validate();
    if (d.gates.empty()) fail(ErrorKind::mismatch, "circuit has no gates");
    if (d.output < 0 || d.output >= int(d.gates.size()))
        fail(ErrorKind::mismatch, "output gate out of range");
    topo_order(d); // also checks input ranges and acyclicity
    for (int gi = 0; gi < int(d.gates.size()); ++gi) {
        const auto &g = d.gates[size_t(gi)];
        std::string id = "gate " + std::to_string(gi);
        if (g.vnode < 0 || g.vnode >= d.vtree.num_nodes())
            fail(ErrorKind::mismatch, id + ": v-tree assignment out of range");
        const auto &vn = d.vtree.nodes[size_t(g.vnode)];
        switch (g.kind) {
        case GateKind::literal:
            if (!d.vtree.is_leaf(g.vnode))
                fail(ErrorKind::mismatch, id + ": literal gate at an internal v-tree node");
            if (g.lit == 0 || lit_var(g.lit) != vn.var)
                fail(ErrorKind::mismatch, id + ": literal does not match its leaf label");
            if (!g.inputs.empty()) fail(ErrorKind::mismatch, id + ": literal gate with inputs");
            break;
        case GateKind::and_gate: {
            if (d.vtree.is_leaf(g.vnode))
                fail(ErrorKind::mismatch, id + ": and-gate at a leaf v-tree node");
            if (g.inputs.size() != 2)
                fail(ErrorKind::mismatch, id + ": and-gate must have exactly two inputs");
            int n1 = d.gates[size_t(g.inputs[0])].vnode;
            int n2 = d.gates[size_t(g.inputs[1])].vnode;
            if (!((n1 == vn.left && n2 == vn.right) || (n1 == vn.right && n2 == vn.left)))
                fail(ErrorKind::mismatch, id + ": and-gate inputs are not at the two child nodes");
            for (int in : g.inputs)
                if (d.gates[size_t(in)].kind == GateKind::and_gate)
                    fail(ErrorKind::mismatch, id + ": and-gate input is an and-gate");
            break;
        }
        case GateKind::or_gate:
            if (d.vtree.is_leaf(g.vnode))
                fail(ErrorKind::mismatch, id + ": or-gate at a leaf v-tree node");
            if (g.inputs.empty())
                fail(ErrorKind::mismatch, id + ": or-gate with no inputs (constant gates are not allowed)");
            for (int in : g.inputs) {
                if (d.gates[size_t(in)].kind != GateKind::and_gate)
                    fail(ErrorKind::mismatch, id + ": or-gate input is not an and-gate");
                if (d.gates[size_t(in)].vnode != g.vnode)
                    fail(ErrorKind::mismatch, id + ": or-gate input lives at a different v-tree node");
            }
            break;
        }
    }
    if (d.gates[size_t(d.output)].vnode != d.vtree.root)
        fail(ErrorKind::mismatch, "output gate is not assigned to the v-tree root");
    return dnnf_width(d);
}

bool evaluate(const StructuredDnnf &d, const Assignment &a) {
    if (d.trivial == StructuredDnnf::Trivial::const_true) return true;
    if (d.trivial == StructuredDnnf::Trivial::const_false) return false;
    auto vs = d.vtree.vars();
    if (!vs.empty() && a.num_vars() < vs.back())
        fail(ErrorKind::invalid, "assignment is not total over the circuit's variables");
    std::vector<signed char> val(d.gates.size(), -1);
    for (int g : topo_order(d)) {
        const auto &gate = d.gates[size_t(g)];
        switch (gate.kind) {
        case GateKind::literal:
            val[size_t(g)] = a[lit_var(gate.lit)] == lit_positive(gate.lit);
            break;
        case GateKind::and_gate:
            val[size_t(g)] = val[size_t(gate.inputs[0])] && val[size_t(gate.inputs[1])];
            break;
        case GateKind::or_gate: {
            signed char v = 0;
            for (int in : gate.inputs) v = v || val[size_t(in)];
            val[size_t(g)] = v;
            break;
        }
        }
    }
    return val[size_t(d.output)];
}

namespace {

// 64-row chunk patterns for the lowest six index bits
constexpr std::uint64_t kBitPattern[6] = {
    0xaaaaaaaaaaaaaaaaull, 0xccccccccccccccccull, 0xf0f0f0f0f0f0f0f0ull,
    0xff00ff00ff00ff00ull, 0xffff0000ffff0000ull, 0xffffffff00000000ull,
};

// Evaluates all gates over one 64-row chunk of the truth table. `bitpos`
// maps a variable to its row-index bit.
void eval_chunk(const StructuredDnnf &d, const std::vector<int> &order,
                const std::vector<int> &bitpos, std::uint64_t chunk,
                std::vector<std::uint64_t> &val) {
    for (int g : order) {
        const auto &gate = d.gates[size_t(g)];
        switch (gate.kind) {
        case GateKind::literal: {
            int p = bitpos[size_t(lit_var(gate.lit))];
            std::uint64_t v;
            if (p < 6) v = kBitPattern[p];
            else v = ((chunk >> (p - 6)) & 1) ? ~std::uint64_t(0) : 0;
            val[size_t(g)] = lit_positive(gate.lit) ? v : ~v;
            break;
        }
        case GateKind::and_gate:
            val[size_t(g)] = val[size_t(gate.inputs[0])] & val[size_t(gate.inputs[1])];
            break;
        case GateKind::or_gate: {
            std::uint64_t v = 0;
            for (int in : gate.inputs) v |= val[size_t(in)];
            val[size_t(g)] = v;
            break;
        }
        }
    }
}

std::vector<int> bit_positions(const std::vector<Var> &vars) {
    int m = int(vars.size());
    std::vector<int> bitpos(vars.empty() ? 1 : size_t(vars.back()) + 1, -1);
    for (int i = 0; i < m; ++i) bitpos[size_t(vars[size_t(i)])] = m - 1 - i;
    return bitpos;
}

} // namespace

FunctionSpec dnnf_table(const StructuredDnnf &d) {
    auto vars = d.variables();
    int m = int(vars.size());
    if (m > kBruteForceVarCap)
        fail(ErrorKind::cap, "truth table over " + std::to_string(m) + " variables exceeds the cap");
    Bitset onset(std::uint64_t(1) << m, d.trivial == StructuredDnnf::Trivial::const_true);
    if (d.is_trivial()) return FunctionSpec(vars, std::move(onset));

    auto order = topo_order(d);
    auto bitpos = bit_positions(vars);
    std::vector<std::uint64_t> val(d.gates.size(), 0);
    if (m < 6) {
        eval_chunk(d, order, bitpos, 0, val);
        for (std::uint64_t r = 0; r < (std::uint64_t(1) << m); ++r)
            if ((val[size_t(d.output)] >> r) & 1) onset.set(r);
    } else {
        std::uint64_t chunks = std::uint64_t(1) << (m - 6);
        for (std::uint64_t c = 0; c < chunks; ++c) {
            eval_chunk(d, order, bitpos, c, val);
            onset.words()[c] = val[size_t(d.output)];
        }
    }
    return FunctionSpec(vars, std::move(onset));
}

DeterminismCheck is_deterministic(const StructuredDnnf &d) {
    DeterminismCheck res;
    auto vars = d.variables();
    int m = int(vars.size());
    if (m > kBruteForceVarCap)
        fail(ErrorKind::cap, "determinism check over " + std::to_string(m) +
                                 " variables exceeds the cap");
    if (d.is_trivial()) {
        res.ok = true;
        return res;
    }
    auto order = topo_order(d);
    auto bitpos = bit_positions(vars);
    std::vector<std::uint64_t> val(d.gates.size(), 0);
    std::uint64_t chunks = m < 6 ? 1 : (std::uint64_t(1) << (m - 6));
    std::uint64_t row_mask = m < 6 ? ((std::uint64_t(1) << (std::uint64_t(1) << m)) - 1) : ~std::uint64_t(0);
    for (std::uint64_t c = 0; c < chunks; ++c) {
        eval_chunk(d, order, bitpos, c, val);
        for (int g = 0; g < int(d.gates.size()); ++g) {
            const auto &gate = d.gates[size_t(g)];
            if (gate.kind != GateKind::or_gate) continue;
            std::uint64_t seen = 0, twice = 0;
            for (int in : gate.inputs) {
                twice |= seen & val[size_t(in)];
                seen |= val[size_t(in)];
            }
            twice &= row_mask;
            if (twice) {
                res.gate = g;
                std::uint64_t row = c * 64 + std::uint64_t(__builtin_ctzll(twice));
                Assignment a(vars.empty() ? 0 : vars.back());
                for (int i = 0; i < m; ++i)
                    a.set(vars[size_t(i)], (row >> (m - 1 - i)) & 1);
                res.assignment = a;
                return res;
            }
        }
    }
    res.ok = true;
    return res;
}

StructuredDnnf with_verified_determinism(StructuredDnnf d) {
    auto check = is_deterministic(d);
    if (!check.ok)
        fail(ErrorKind::mismatch, "circuit is not deterministic (or-gate " +
                                      std::to_string(check.gate) + ")");
    d.det = StructuredDnnf::Determinism::verified;
    return d;
}

StructuredDnnf reduce(const StructuredDnnf &d) {
    if (d.is_trivial()) return d;
    std::vector<char> keep(d.gates.size(), 0);
    std::vector<int> stack{d.output};
    keep[size_t(d.output)] = 1;
    while (!stack.empty()) {
        int g = stack.back();
        stack.pop_back();
        for (int in : d.gates[size_t(g)].inputs)
            if (!keep[size_t(in)]) {
                keep[size_t(in)] = 1;
                stack.push_back(in);
            }
    }
    StructuredDnnf out;
    out.vtree = d.vtree;
    out.det = d.det;
    std::vector<int> remap(d.gates.size(), -1);
    for (int g = 0; g < int(d.gates.size()); ++g) {
        if (!keep[size_t(g)]) continue;
        remap[size_t(g)] = int(out.gates.size());
        out.gates.push_back(d.gates[size_t(g)]);
    }
    for (auto &g : out.gates)
        for (int &in : g.inputs) in = remap[size_t(in)];
    out.output = remap[size_t(d.output)];
    return out;
}

StructuredDnnf forget(const StructuredDnnf &d, Var z) {
    auto vars = d.variables();
    if (!std::binary_search(vars.begin(), vars.end(), z))
        fail(ErrorKind::invalid, "variable " + std::to_string(z) + " is not present");
    if (d.is_trivial()) {
        StructuredDnnf out = d;
        out.trivial_vars.erase(std::find(out.trivial_vars.begin(), out.trivial_vars.end(), z));
        return out;
    }
    // locate the leaf, its parent u and sibling s
    int lz = -1;
    for (int i = 0; i < d.vtree.num_nodes(); ++i)
        if (d.vtree.is_leaf(i) && d.vtree.nodes[size_t(i)].var == z) lz = i;
    std::vector<int> vparent(d.vtree.nodes.size(), -1);
    for (int i = 0; i < d.vtree.num_nodes(); ++i)
        if (!d.vtree.is_leaf(i)) {
            vparent[size_t(d.vtree.nodes[size_t(i)].left)] = i;
            vparent[size_t(d.vtree.nodes[size_t(i)].right)] = i;
        }
    if (lz == d.vtree.root) {
        // single-variable circuit: exists z of a literal is the constant true
        return StructuredDnnf::make_trivial(StructuredDnnf::Trivial::const_true, {});
    }
    int u = vparent[size_t(lz)];
    const auto &un = d.vtree.nodes[size_t(u)];
    int s = (un.left == lz) ? un.right : un.left;
    bool s_leaf = d.vtree.is_leaf(s);

    // new v-tree: drop lz and u, splice s into u's place
    std::vector<int> vmap(d.vtree.nodes.size(), -1);
    VTree nv;
    for (int i = 0; i < d.vtree.num_nodes(); ++i) {
        if (i == lz || i == u) continue;
        vmap[size_t(i)] = int(nv.nodes.size());
        nv.nodes.push_back(d.vtree.nodes[size_t(i)]);
    }
    for (auto &n : nv.nodes) {
        if (n.left == -1) continue;
        int l = n.left == u ? s : n.left;
        int r = n.right == u ? s : n.right;
        n.left = vmap[size_t(l)];
        n.right = vmap[size_t(r)];
    }
    nv.root = vmap[size_t(d.vtree.root == u ? s : d.vtree.root)];

    // Translate old gates into the new circuit in topological order. A plain
    // gate maps to one new gate; an or-gate at u maps to a fresh or-gate at s
    // (s internal) or to a literal choice list (s leaf); an and-gate maps to
    // one new and per choice variant.
    StructuredDnnf out;
    out.vtree = nv;
    std::vector<std::vector<int>> ref(d.gates.size()); // old id -> new ids (choice list)
    auto resolve = [&](int old_id) -> const std::vector<int> & { return ref[size_t(old_id)]; };
    for (int g : topo_order(d)) {
        const auto &gate = d.gates[size_t(g)];
        if (gate.vnode == lz) continue; // dropped literal of z
        if (gate.vnode == u) {
            if (gate.kind != GateKind::or_gate) continue; // u-ands fold into the u-ors
            // s-side inputs of this or's and-children
            std::vector<int> sides;
            for (int ai : gate.inputs)
                for (int in : d.gates[size_t(ai)].inputs)
                    if (d.gates[size_t(in)].vnode != lz) sides.push_back(in);
            std::sort(sides.begin(), sides.end());
            sides.erase(std::unique(sides.begin(), sides.end()), sides.end());
            if (s_leaf) {
                std::vector<int> lits;
                for (int x : sides)
                    for (int nid : resolve(x)) lits.push_back(nid);
                std::sort(lits.begin(), lits.end());
                lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
                ref[size_t(g)] = std::move(lits); // choice over s-literals
            } else {
                // flatten or-over-ors into one or-gate at s
                std::vector<int> ands;
                for (int og : sides)
                    for (int in : d.gates[size_t(og)].inputs)
                        for (int nid : resolve(in)) ands.push_back(nid);
                std::sort(ands.begin(), ands.end());
                ands.erase(std::unique(ands.begin(), ands.end()), ands.end());
                StructuredDnnf::Gate no;
                no.kind = GateKind::or_gate;
                no.vnode = vmap[size_t(s)];
                no.inputs = std::move(ands);
                ref[size_t(g)] = {int(out.gates.size())};
                out.gates.push_back(std::move(no));
            }
            continue;
        }
        switch (gate.kind) {
        case GateKind::literal: {
            auto copy = gate;
            copy.vnode = vmap[size_t(gate.vnode)];
            ref[size_t(g)] = {int(out.gates.size())};
            out.gates.push_back(std::move(copy));
            break;
        }
        case GateKind::or_gate: {
            std::vector<int> ins;
            for (int in : gate.inputs)
                for (int nid : resolve(in)) ins.push_back(nid);
            std::sort(ins.begin(), ins.end());
            ins.erase(std::unique(ins.begin(), ins.end()), ins.end());
            auto copy = gate;
            copy.vnode = vmap[size_t(gate.vnode)];
            copy.inputs = std::move(ins);
            ref[size_t(g)] = {int(out.gates.size())};
            out.gates.push_back(std::move(copy));
            break;
        }
        case GateKind::and_gate: {
            std::vector<int> ids;
            for (int x : resolve(gate.inputs[0]))
                for (int y : resolve(gate.inputs[1])) {
                    StructuredDnnf::Gate na;
                    na.kind = GateKind::and_gate;
                    na.vnode = vmap[size_t(gate.vnode)];
                    na.inputs = {x, y};
                    ids.push_back(int(out.gates.size()));
                    out.gates.push_back(std::move(na));
                }
            ref[size_t(g)] = std::move(ids);
            break;
        }
        }
    }
    const auto &oref = ref[size_t(d.output)];
    if (oref.empty())
        fail(ErrorKind::invalid, "internal: output vanished while forgetting");
    if (oref.size() == 1) {
        out.output = oref[0];
    } else {
        // output became a choice; it is either two s-literals (constant true)
        // or several and-variants that need a fresh or-gate at the root
        bool all_literal = true;
        for (int x : oref) all_literal = all_literal && out.gates[size_t(x)].kind == GateKind::literal;
        if (all_literal)
            return StructuredDnnf::make_trivial(StructuredDnnf::Trivial::const_true, nv.vars());
        StructuredDnnf::Gate no;
        no.kind = GateKind::or_gate;
        no.vnode = out.gates[size_t(oref[0])].vnode;
        no.inputs = oref;
        out.output = int(out.gates.size());
        out.gates.push_back(std::move(no));
    }
    return reduce(out);
}

ProofTreeCount count_proof_trees(const StructuredDnnf &d) {
    if (d.is_trivial())
        fail(ErrorKind::invalid, "constant marker objects have no proof trees");
    constexpr unsigned __int128 kCap = (unsigned __int128)(~std::uint64_t(0)) + 1;
    std::vector<unsigned __int128> cnt(d.gates.size(), 0);
    for (int g : topo_order(d)) {
        const auto &gate = d.gates[size_t(g)];
        unsigned __int128 c = 0;
        switch (gate.kind) {
        case GateKind::literal: c = 1; break;
        case GateKind::and_gate: {
            unsigned __int128 a = cnt[size_t(gate.inputs[0])], b = cnt[size_t(gate.inputs[1])];
            c = (a >= kCap || b >= kCap || (b != 0 && a > kCap / b)) ? kCap : a * b;
            break;
        }
        case GateKind::or_gate:
            for (int in : gate.inputs) {
                c += cnt[size_t(in)];
                if (c >= kCap) c = kCap;
            }
            break;
        }
        cnt[size_t(g)] = c;
    }
    ProofTreeCount out;
    if (cnt[size_t(d.output)] >= kCap) {
        out.overflow = true;
        out.value = ~std::uint64_t(0);
    } else {
        out.value = std::uint64_t(cnt[size_t(d.output)]);
    }
    return out;
}

namespace {

bool walk_proof_trees(const StructuredDnnf &d, std::vector<int> &pending, std::vector<int> &acc,
                      const std::function<bool(const std::vector<int> &)> &fn) {
    if (pending.empty()) {
        std::vector<int> tree = acc;
        std::sort(tree.begin(), tree.end());
        return fn(tree);
    }
    int g = pending.back();
    pending.pop_back();
    acc.push_back(g);
    const auto &gate = d.gates[size_t(g)];
    bool cont = true;
    switch (gate.kind) {
    case GateKind::literal:
        cont = walk_proof_trees(d, pending, acc, fn);
        break;
    case GateKind::and_gate:
        pending.push_back(gate.inputs[0]);
        pending.push_back(gate.inputs[1]);
        cont = walk_proof_trees(d, pending, acc, fn);
        pending.pop_back();
        pending.pop_back();
        break;
    case GateKind::or_gate:
        for (int in : gate.inputs) {
            pending.push_back(in);
            cont = walk_proof_trees(d, pending, acc, fn);
            pending.pop_back();
            if (!cont) break;
        }
        break;
    }
    acc.pop_back();
    pending.push_back(g);
    return cont;
}

} // namespace

bool for_each_proof_tree(const StructuredDnnf &d,
                         const std::function<bool(const std::vector<int> &)> &fn) {
    if (d.is_trivial())
        fail(ErrorKind::invalid, "constant marker objects have no proof trees");
    std::vector<int> pending{d.output}, acc;
    return walk_proof_trees(d, pending, acc, fn);
}

bool is_definable(const FunctionSpec &spec, Var z,
                  std::pair<std::uint64_t, std::uint64_t> *conflict) {
    auto it = std::find(spec.vars.begin(), spec.vars.end(), z);
    if (it == spec.vars.end())
        fail(ErrorKind::invalid, "variable " + std::to_string(z) + " is not in the spec");
    int i = int(it - spec.vars.begin());
    std::uint64_t zbit = std::uint64_t(1) << (spec.num_vars() - 1 - i);
    for (std::uint64_t r = spec.onset.find_first(); r < spec.onset.size();
         r = spec.onset.find_next(r)) {
        if ((r & zbit) == 0 && spec.onset.get(r | zbit)) {
            if (conflict) *conflict = {r, r | zbit};
            return false;
        }
    }
    return true;
}

StructuredDnnf forget_preserving_determinism(const StructuredDnnf &d, Var z) {
    StructuredDnnf red = reduce(d);
    if (red.det != StructuredDnnf::Determinism::verified) {
        auto check = is_deterministic(red);
        if (!check.ok)
            fail(ErrorKind::invalid, "circuit is not deterministic (or-gate " +
                                         std::to_string(check.gate) + ")");
        red.det = StructuredDnnf::Determinism::verified;
    }
    FunctionSpec table = dnnf_table(red);
    std::pair<std::uint64_t, std::uint64_t> conflict;
    if (!is_definable(table, z, &conflict))
        fail(ErrorKind::invalid,
             "variable " + std::to_string(z) + " is not definable from the others: onset rows " +
                 std::to_string(conflict.first) + " and " + std::to_string(conflict.second) +
                 " differ only on it");
    StructuredDnnf out = forget(red, z);
    if (out.num_vars() <= kBruteForceVarCap) {
        auto check = is_deterministic(out);
        if (!check.ok)
            fail(ErrorKind::mismatch,
                 "internal: forgetting a definable variable broke determinism at or-gate " +
                     std::to_string(check.gate));
        out.det = StructuredDnnf::Determinism::verified;
    }
    return out;
}

// ------------------------------------------------------------- text io -----

StructuredDnnf parse_sdnnf(std::istream &in) {
    StructuredDnnf d;
    std::string line;
    int line_no = 0;
    bool header = false;
    int declared_vt = 0, declared_gates = 0;
    int vt_root = -1;
    std::vector<std::pair<int, VTree::Node>> vt_nodes;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok) || tok == "c") continue;
        auto bad = [&](const std::string &what) {
            fail(ErrorKind::parse, "line " + std::to_string(line_no) + ": " + what);
        };
        if (tok == "sdnnf") {
            if (header) bad("duplicate header");
            std::string t2;
            ls >> t2;
            if (t2 == "trivial") {
                int kind;
                if (!(ls >> kind)) bad("trivial marker needs 0 or 1");
                std::vector<Var> vars;
                Var v;
                while (ls >> v) vars.push_back(v);
                return StructuredDnnf::make_trivial(kind ? StructuredDnnf::Trivial::const_true
                                                         : StructuredDnnf::Trivial::const_false,
                                                    vars);
            }
            declared_vt = std::stoi(t2);
            if (!(ls >> declared_gates)) bad("malformed header");
            header = true;
            continue;
        }
        if (!header) bad("content before sdnnf header");
        if (tok == "vt") {
            int id, a, b;
            if (!(ls >> id >> a)) bad("malformed vt line");
            if (ls >> b) vt_nodes.push_back({id, {a, b, 0}});
            else vt_nodes.push_back({id, {-1, -1, a}});
            continue;
        }
        if (tok == "vtroot") {
            if (!(ls >> vt_root)) bad("malformed vtroot line");
            continue;
        }
        if (tok == "out") {
            int gid;
            if (!(ls >> gid) || gid < 1 || gid > int(d.gates.size())) bad("bad out line");
            d.output = gid - 1;
            continue;
        }
        StructuredDnnf::Gate g;
        if (tok == "L") {
            int var, sign;
            if (!(ls >> var >> sign)) bad("L needs <var> <sign>");
            g.kind = GateKind::literal;
            g.lit = sign ? var : -var;
        } else if (tok == "A") {
            int a, b;
            if (!(ls >> a >> b)) bad("A needs two gate ids");
            g.kind = GateKind::and_gate;
            g.inputs = {a - 1, b - 1};
        } else if (tok == "O") {
            g.kind = GateKind::or_gate;
            int x;
            while (ls >> x) g.inputs.push_back(x - 1);
        } else if (tok == "M") {
            int gid, vn;
            if (!(ls >> gid >> vn)) bad("M needs <gate> <vtnode>");
            if (gid < 1 || gid > int(d.gates.size())) bad("M references an unknown gate");
            d.gates[size_t(gid - 1)].vnode = vn;
            continue;
        } else {
            bad("unknown line kind '" + tok + "'");
        }
        for (int in : g.inputs)
            if (in < 0 || in >= int(d.gates.size()))
                bad("gate references a gate not defined above it");
        d.gates.push_back(std::move(g));
    }
    if (!header) fail(ErrorKind::parse, "missing sdnnf header");
    if (int(d.gates.size()) != declared_gates)
        fail(ErrorKind::parse, "header declares " + std::to_string(declared_gates) +
                                   " gates, file has " + std::to_string(d.gates.size()));
    if (int(vt_nodes.size()) != declared_vt)
        fail(ErrorKind::parse, "header declares " + std::to_string(declared_vt) +
                                   " v-tree nodes, file has " + std::to_string(vt_nodes.size()));
    d.vtree.nodes.assign(vt_nodes.size(), {});
    for (auto &[id, node] : vt_nodes) {
        if (id < 0 || id >= int(vt_nodes.size()))
            fail(ErrorKind::parse, "v-tree node id out of range");
        d.vtree.nodes[size_t(id)] = node;
    }
    d.vtree.root = vt_root;
    if (d.output == -1) d.output = int(d.gates.size()) - 1;
    validate_dnnf(d);
    return d;
}

StructuredDnnf parse_sdnnf_string(const std::string &text) {
    std::istringstream in(text);
    return parse_sdnnf(in);
}

StructuredDnnf parse_sdnnf_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::io, "cannot open " + path);
    return parse_sdnnf(in);
}

void write_sdnnf(const StructuredDnnf &d, std::ostream &out) {
    if (d.is_trivial()) {
        out << "sdnnf trivial " << (d.trivial == StructuredDnnf::Trivial::const_true ? 1 : 0);
        for (Var v : d.trivial_vars) out << ' ' << v;
        out << '\n';
        return;
    }
    // gates are written in topological order; ids in the file are positions
    // in that order and an `out` line names the output gate
    auto order = topo_order(d);
    std::vector<int> pos(d.gates.size(), -1);
    for (size_t i = 0; i < order.size(); ++i) pos[size_t(order[i])] = int(i);
    out << "sdnnf " << d.vtree.num_nodes() << ' ' << d.gates.size() << '\n';
    for (int i = 0; i < d.vtree.num_nodes(); ++i) {
        const auto &n = d.vtree.nodes[size_t(i)];
        if (n.left == -1) out << "vt " << i << ' ' << n.var << '\n';
        else out << "vt " << i << ' ' << n.left << ' ' << n.right << '\n';
    }
    out << "vtroot " << d.vtree.root << '\n';
    for (int g : order) {
        const auto &gate = d.gates[size_t(g)];
        switch (gate.kind) {
        case GateKind::literal:
            out << "L " << lit_var(gate.lit) << ' ' << (lit_positive(gate.lit) ? 1 : 0) << '\n';
            break;
        case GateKind::and_gate:
            out << "A " << pos[size_t(gate.inputs[0])] + 1 << ' ' << pos[size_t(gate.inputs[1])] + 1
                << '\n';
            break;
        case GateKind::or_gate: {
            out << "O";
            for (int in : gate.inputs) out << ' ' << pos[size_t(in)] + 1;
            out << '\n';
            break;
        }
        }
    }
    for (size_t i = 0; i < order.size(); ++i)
        out << "M " << i + 1 << ' ' << d.gates[size_t(order[i])].vnode << '\n';
    out << "out " << pos[size_t(d.output)] + 1 << '\n';
}

std::string write_sdnnf_string(const StructuredDnnf &d) {
    std::ostringstream out;
    write_sdnnf(d, out);
    return out.str();
}

void write_sdnnf_file(const StructuredDnnf &d, const std::string &path) {
    std::ofstream out(path);
    if (!out) fail(ErrorKind::io, "cannot open " + path + " for writing");
    write_sdnnf(d, out);
}

} // namespace widthforge
