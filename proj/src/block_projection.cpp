#include "widthforge/block_projection.hpp"

#include <algorithm>
#include <map>

namespace widthforge {

int BlockTree::add(std::vector<Var> aux, std::vector<Var> inputs, int parent) {
    std::sort(aux.begin(), aux.end());
    std::sort(inputs.begin(), inputs.end());
    nodes.push_back({std::move(aux), std::move(inputs), parent});
    return int(nodes.size()) - 1;
}

namespace {

constexpr int kBlockBitCap = 22;

struct LocalSpace {
    std::vector<Var> vars;   // aux then inputs, each ascending; bit i = vars[i]
    std::vector<int> in_pos; // positions of the input vars within `vars`
    int bits() const { return int(vars.size()); }
};

// A clause as a falsification test split over a (child, parent) bit pair:
// it is falsified by (sc, sp) iff (sc & cmask) == cval and (sp & pmask) == pval.
struct SplitClause {
    std::uint64_t cmask = 0, cval = 0, pmask = 0, pval = 0;
};

struct GroupedClauses {
    // grouped by mask pair; per parent value the sorted child values
    struct Group {
        std::uint64_t cmask, pmask;
        std::map<std::uint64_t, std::vector<std::uint64_t>> by_pval;
    };
    std::vector<Group> groups;

    void add(const SplitClause &sc) {
        for (auto &g : groups)
            if (g.cmask == sc.cmask && g.pmask == sc.pmask) {
                g.by_pval[sc.pval].push_back(sc.cval);
                return;
            }
        groups.push_back({sc.cmask, sc.pmask, {}});
        groups.back().by_pval[sc.pval].push_back(sc.cval);
    }
    void finish() {
        for (auto &g : groups)
            for (auto &[pv, cvs] : g.by_pval) {
                std::sort(cvs.begin(), cvs.end());
                cvs.erase(std::unique(cvs.begin(), cvs.end()), cvs.end());
            }
    }
};

// saturating 2-counter tables over the subtree-input index space
struct CountTable {
    Bitset one, two;
    explicit CountTable(std::uint64_t bits = 0)
        : one(std::uint64_t(1) << bits), two(std::uint64_t(1) << bits) {}
};

void accumulate(CountTable &acc, const CountTable &t) {
    for (size_t w = 0; w < acc.one.words().size(); ++w) {
        std::uint64_t a1 = acc.one.words()[w], t1 = t.one.words()[w];
        acc.two.words()[w] |= t.two.words()[w] | (a1 & t1);
        acc.one.words()[w] = a1 | t1;
    }
}

} // namespace

BlockProjection project_via_blocks(const CnfFormula &f, const BlockTree &bt) {
    // block sanity: disjoint cover with matching roles
    std::vector<int> block_of(size_t(f.num_vars) + 1, -1);
    int root = -1;
    for (int b = 0; b < int(bt.nodes.size()); ++b) {
        const auto &n = bt.nodes[size_t(b)];
        if (n.parent == -1) {
            if (root != -1) fail(ErrorKind::invalid, "block tree has two roots");
            root = b;
        } else if (n.parent < 0 || n.parent >= int(bt.nodes.size()) || n.parent == b) {
            fail(ErrorKind::invalid, "bad block parent");
        }
        for (Var v : n.aux) {
            if (v < 1 || v > f.num_vars || block_of[size_t(v)] != -1 || !f.is_aux[size_t(v)])
                fail(ErrorKind::invalid, "block aux variable " + std::to_string(v) + " is misplaced");
            block_of[size_t(v)] = b;
        }
        for (Var v : n.inputs) {
            if (v < 1 || v > f.num_vars || block_of[size_t(v)] != -1 || f.is_aux[size_t(v)])
                fail(ErrorKind::invalid, "block input variable " + std::to_string(v) + " is misplaced");
            block_of[size_t(v)] = b;
        }
    }
    if (root == -1) fail(ErrorKind::invalid, "block tree has no root");
    for (Var v = 1; v <= f.num_vars; ++v)
        if (block_of[size_t(v)] == -1)
            fail(ErrorKind::invalid, "variable " + std::to_string(v) + " is in no block");

    // local bit spaces
    int nb = int(bt.nodes.size());
    std::vector<LocalSpace> space(static_cast<size_t>(nb));
    for (int b = 0; b < nb; ++b) {
        auto &sp = space[size_t(b)];
        sp.vars = bt.nodes[size_t(b)].aux;
        for (Var v : bt.nodes[size_t(b)].inputs) {
            sp.in_pos.push_back(int(sp.vars.size()));
            sp.vars.push_back(v);
        }
        if (sp.bits() > kBlockBitCap)
            fail(ErrorKind::cap, "block with " + std::to_string(sp.bits()) +
                                     " variables exceeds the enumeration cap");
    }
    auto local_bit = [&](int b, Var v) -> int {
        const auto &vs = space[size_t(b)].vars;
        auto it = std::find(vs.begin(), vs.end(), v);
        return it == vs.end() ? -1 : int(it - vs.begin());
    };

    // clause placement
    bool unsat = false;
    std::vector<GroupedClauses> intra(static_cast<size_t>(nb)), cross(static_cast<size_t>(nb));
    for (const Clause &c : f.clauses) {
        if (c.tautological) continue;
        if (c.lits.empty()) {
            unsat = true;
            continue;
        }
        std::vector<int> blocks;
        for (Lit l : c.lits) blocks.push_back(block_of[size_t(lit_var(l))]);
        std::sort(blocks.begin(), blocks.end());
        blocks.erase(std::unique(blocks.begin(), blocks.end()), blocks.end());
        int home = -1; // child side
        bool is_cross = false;
        if (blocks.size() == 1) {
            home = blocks[0];
        } else if (blocks.size() == 2) {
            if (bt.nodes[size_t(blocks[0])].parent == blocks[1]) home = blocks[0];
            else if (bt.nodes[size_t(blocks[1])].parent == blocks[0]) home = blocks[1];
            else fail(ErrorKind::invalid, "clause spans blocks that are not parent and child");
            is_cross = true;
        } else {
            fail(ErrorKind::invalid, "clause spans more than two blocks");
        }
        SplitClause sc;
        int parent = bt.nodes[size_t(home)].parent;
        for (Lit l : c.lits) {
            Var v = lit_var(l);
            int pos = local_bit(home, v);
            if (pos >= 0) {
                sc.cmask |= std::uint64_t(1) << pos;
                if (!lit_positive(l)) sc.cval |= std::uint64_t(1) << pos;
            } else {
                int ppos = local_bit(parent, v);
                sc.pmask |= std::uint64_t(1) << ppos;
                if (!lit_positive(l)) sc.pval |= std::uint64_t(1) << ppos;
            }
        }
        if (is_cross) cross[size_t(home)].add(sc);
        else intra[size_t(home)].add(sc);
    }
    for (int b = 0; b < nb; ++b) {
        intra[size_t(b)].finish();
        cross[size_t(b)].finish();
    }

    auto inputs_sorted = f.input_vars();
    int m = int(inputs_sorted.size());
    if (m > kBruteForceVarCap)
        fail(ErrorKind::cap, "projection target exceeds the input cap");

    if (unsat) {
        Bitset onset(std::uint64_t(1) << m, false);
        return {FunctionSpec(inputs_sorted, std::move(onset)), true};
    }

    // valid local states per block (intra clauses only)
    std::vector<std::vector<std::uint64_t>> valid(static_cast<size_t>(nb));
    for (int b = 0; b < nb; ++b) {
        std::uint64_t limit = std::uint64_t(1) << space[size_t(b)].bits();
        for (std::uint64_t s = 0; s < limit; ++s) {
            bool ok = true;
            for (const auto &g : intra[size_t(b)].groups) {
                if (g.pmask != 0) fail(ErrorKind::invalid, "internal: intra clause with parent part");
                auto it = g.by_pval.find(0);
                if (it == g.by_pval.end()) continue;
                if (std::binary_search(it->second.begin(), it->second.end(), s & g.cmask)) {
                    ok = false;
                    break;
                }
            }
            if (ok) valid[size_t(b)].push_back(s);
        }
    }

    // children lists, processing order (children before parents)
    std::vector<std::vector<int>> children(static_cast<size_t>(nb));
    for (int b = 0; b < nb; ++b)
        if (bt.nodes[size_t(b)].parent != -1) children[size_t(bt.nodes[size_t(b)].parent)].push_back(b);
    std::vector<int> order;
    {
        std::vector<int> stack{root}, tmp;
        while (!stack.empty()) {
            int b = stack.back();
            stack.pop_back();
            tmp.push_back(b);
            for (int c : children[size_t(b)]) stack.push_back(c);
        }
        order.assign(tmp.rbegin(), tmp.rend());
        if (int(order.size()) != nb) fail(ErrorKind::invalid, "block tree is disconnected");
    }

    // subtree input bit counts; child spaces stack below the own inputs
    std::vector<int> sub_bits(size_t(nb), 0);
    for (int b : order) {
        sub_bits[size_t(b)] = int(bt.nodes[size_t(b)].inputs.size());
        for (int c : children[size_t(b)]) sub_bits[size_t(b)] += sub_bits[size_t(c)];
    }

    std::vector<std::vector<CountTable>> tables(static_cast<size_t>(nb)); // per block, per valid state
    for (int b : order) {
        const auto &sp = space[size_t(b)];
        tables[size_t(b)].reserve(valid[size_t(b)].size());
        for (std::uint64_t s : valid[size_t(b)]) {
            // child contributions under this state
            CountTable acc(0);
            acc.one.set(0);
            for (int c : children[size_t(b)]) {
                CountTable u(std::uint64_t(sub_bits[size_t(c)]));
                for (size_t ci = 0; ci < valid[size_t(c)].size(); ++ci) {
                    std::uint64_t scv = valid[size_t(c)][ci];
                    bool compatible = true;
                    for (const auto &g : cross[size_t(c)].groups) {
                        auto it = g.by_pval.find(s & g.pmask);
                        if (it == g.by_pval.end()) continue;
                        if (std::binary_search(it->second.begin(), it->second.end(), scv & g.cmask)) {
                            compatible = false;
                            break;
                        }
                    }
                    if (!compatible) continue;
                    accumulate(u, tables[size_t(c)][ci]);
                }
                // outer product acc x u
                std::uint64_t acc_sz = acc.one.size(), u_sz = u.one.size();
                CountTable next(0);
                next.one = Bitset(acc_sz * u_sz);
                next.two = Bitset(acc_sz * u_sz);
                for (std::uint64_t i = 0; i < acc_sz; ++i) {
                    bool a1 = acc.one.get(i), a2 = acc.two.get(i);
                    if (!a1) continue;
                    if (u_sz >= 64) {
                        size_t wo = size_t(i * u_sz / 64);
                        for (size_t w = 0; w < u.one.words().size(); ++w) {
                            next.one.words()[wo + w] = u.one.words()[w];
                            next.two.words()[wo + w] =
                                a2 ? u.one.words()[w] : u.two.words()[w];
                        }
                    } else {
                        for (std::uint64_t j = 0; j < u_sz; ++j) {
                            if (!u.one.get(j)) continue;
                            next.one.set(i * u_sz + j);
                            if (a2 || u.two.get(j)) next.two.set(i * u_sz + j);
                        }
                    }
                }
                acc = std::move(next);
            }
            // place below the own-input offset
            int own = int(bt.nodes[size_t(b)].inputs.size());
            CountTable t(std::uint64_t(sub_bits[size_t(b)]));
            std::uint64_t own_val = 0;
            for (int i = 0; i < own; ++i) {
                int pos = sp.in_pos[size_t(i)];
                // input vars ascending: first one is the most significant
                if ((s >> pos) & 1) own_val |= std::uint64_t(1) << (own - 1 - i);
            }
            std::uint64_t offset = own_val * acc.one.size();
            for (std::uint64_t i = acc.one.find_first(); i < acc.one.size(); i = acc.one.find_next(i)) {
                t.one.set(offset + i);
                if (acc.two.get(i)) t.two.set(offset + i);
            }
            tables[size_t(b)].push_back(std::move(t));
        }
        for (int c : children[size_t(b)]) tables[size_t(c)].clear(); // consumed
    }

    // fold root states
    CountTable res(std::uint64_t(sub_bits[size_t(root)]));
    for (auto &t : tables[size_t(root)]) accumulate(res, t);

    // remap from the tree's input order to the ascending-id row convention
    std::vector<Var> tree_order; // most significant first
    {
        std::vector<int> stack{root};
        std::vector<int> pre;
        while (!stack.empty()) {
            int b = stack.back();
            stack.pop_back();
            pre.push_back(b);
            auto ch = children[size_t(b)];
            for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
        }
        for (int b : pre)
            for (Var v : bt.nodes[size_t(b)].inputs) tree_order.push_back(v);
    }
    // bit position (from MSB) of each input var in the tree's index
    std::vector<int> tree_pos_of(size_t(f.num_vars) + 1, -1);
    for (size_t i = 0; i < tree_order.size(); ++i) tree_pos_of[size_t(tree_order[i])] = int(i);
    Bitset onset(std::uint64_t(1) << m, false);
    Bitset twos(std::uint64_t(1) << m, false);
    for (std::uint64_t r = res.one.find_first(); r < res.one.size(); r = res.one.find_next(r)) {
        std::uint64_t row = 0;
        for (int i = 0; i < m; ++i) {
            int tp = tree_pos_of[size_t(inputs_sorted[size_t(i)])];
            if ((r >> (m - 1 - tp)) & 1) row |= std::uint64_t(1) << (m - 1 - i);
        }
        onset.set(row);
        if (res.two.get(r)) twos.set(row);
    }
    BlockProjection out{FunctionSpec(inputs_sorted, std::move(onset)), !twos.any()};
    return out;
}

} // namespace widthforge
