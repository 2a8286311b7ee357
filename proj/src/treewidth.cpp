#include "widthforge/treewidth.hpp"

#include "widthforge/bitset.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace widthforge {

namespace {

// ---- elimination-order machinery on bitmask graphs (n <= 25) ----

struct MaskGraph {
    int n = 0;
    std::vector<std::uint32_t> adj; // indexed 0..n-1 over local ids
    std::vector<int> orig;          // local id -> original vertex id
};

MaskGraph to_mask_graph(const Graph &g, const std::vector<int> &verts) {
    MaskGraph m;
    m.n = int(verts.size());
    m.orig = verts;
    std::vector<int> local(size_t(g.n) + 1, -1);
    for (int i = 0; i < m.n; ++i) local[size_t(verts[size_t(i)])] = i;
    m.adj.assign(size_t(m.n), 0);
    for (auto &[u, v] : g.edges) {
        int a = local[size_t(u)], b = local[size_t(v)];
        if (a >= 0 && b >= 0) {
            m.adj[size_t(a)] |= std::uint32_t(1) << b;
            m.adj[size_t(b)] |= std::uint32_t(1) << a;
        }
    }
    return m;
}

// Vertices outside eliminated|{v} reachable from v through eliminated ones:
// the degree v would have if eliminated after the set `eliminated`.
int fill_degree(const MaskGraph &g, std::uint32_t eliminated, int v) {
    std::uint32_t inside = 0, reach = g.adj[size_t(v)];
    while (true) {
        std::uint32_t grow = reach & eliminated & ~inside;
        if (!grow) break;
        inside |= grow;
        std::uint32_t acc = reach;
        while (grow) {
            int u = __builtin_ctz(grow);
            grow &= grow - 1;
            acc |= g.adj[size_t(u)];
        }
        reach = acc;
    }
    return __builtin_popcount(reach & ~eliminated & ~(std::uint32_t(1) << v));
}

// Subset DP over elimination prefixes; returns width and an optimal order.
std::pair<int, std::vector<int>> tw_subset_dp(const MaskGraph &g) {
    int n = g.n;
    std::vector<std::uint8_t> opt(size_t(1) << n, 0);
    std::uint32_t full = (n == 32) ? ~0u : ((std::uint32_t(1) << n) - 1);
    for (std::uint32_t s = 1; s <= full; ++s) {
        int best = 255;
        std::uint32_t it = s;
        while (it) {
            int v = __builtin_ctz(it);
            it &= it - 1;
            std::uint32_t rest = s & ~(std::uint32_t(1) << v);
            int cand = std::max<int>(opt[rest], fill_degree(g, rest, v));
            best = std::min(best, cand);
        }
        opt[s] = std::uint8_t(best);
    }
    // reconstruct: peel vertices off the full set from the back of the order
    std::vector<int> order(static_cast<size_t>(n));
    std::uint32_t s = full;
    for (int pos = n - 1; pos >= 0; --pos) {
        std::uint32_t it = s;
        int pick = -1;
        while (it) {
            int v = __builtin_ctz(it);
            it &= it - 1;
            std::uint32_t rest = s & ~(std::uint32_t(1) << v);
            if (std::max<int>(opt[rest], fill_degree(g, rest, v)) == opt[s]) {
                pick = v;
                break;
            }
        }
        order[size_t(pos)] = pick;
        s &= ~(std::uint32_t(1) << pick);
    }
    return {opt[full], order};
}

// Greedy clique on a mask graph (lower bound helper).
int greedy_clique(const std::vector<std::uint32_t> &adj) {
    int n = int(adj.size());
    int best = 0;
    for (int s = 0; s < n; ++s) {
        std::uint32_t cand = adj[size_t(s)];
        int size = 1;
        while (cand) {
            int v = -1, vd = -1;
            std::uint32_t it = cand;
            while (it) {
                int u = __builtin_ctz(it);
                it &= it - 1;
                int d = __builtin_popcount(adj[size_t(u)] & cand);
                if (d > vd) {
                    vd = d;
                    v = u;
                }
            }
            ++size;
            cand &= adj[size_t(v)];
        }
        best = std::max(best, size);
    }
    return best;
}

struct TwBranchBound {
    const MaskGraph &g0;
    int best_width;
    std::vector<int> best_order;
    std::vector<int> cur_order;
    std::map<std::uint32_t, int> memo; // eliminated set -> best max-so-far seen
    std::uint32_t full;

    explicit TwBranchBound(const MaskGraph &g, int ub, std::vector<int> ub_order)
        : g0(g), best_width(ub), best_order(std::move(ub_order)) {
        full = (std::uint32_t(1) << g.n) - 1;
    }

    // adj is the current fill graph restricted to remaining vertices
    void run(std::vector<std::uint32_t> adj, std::uint32_t remaining, int sofar) {
        if (sofar >= best_width) return;
        int rem = __builtin_popcount(remaining);
        if (rem - 1 <= sofar || rem <= 1) {
            // any order of the rest stays within sofar
            finish(remaining, sofar);
            return;
        }
        std::uint32_t elim = full & ~remaining;
        auto it = memo.find(elim);
        if (it != memo.end() && it->second <= sofar) return;
        memo[elim] = sofar;

        // simplicial vertices can always go first
        std::uint32_t msk = remaining;
        while (msk) {
            int v = __builtin_ctz(msk);
            msk &= msk - 1;
            std::uint32_t nb = adj[size_t(v)] & remaining;
            bool simplicial = true;
            std::uint32_t t = nb;
            while (t && simplicial) {
                int u = __builtin_ctz(t);
                t &= t - 1;
                simplicial = (nb & ~adj[size_t(u)] & ~(std::uint32_t(1) << u)) == 0;
            }
            if (simplicial) {
                int d = __builtin_popcount(nb);
                if (std::max(sofar, d) >= best_width) return; // forced, no better order exists
                cur_order.push_back(v);
                run(adj, remaining & ~(std::uint32_t(1) << v), std::max(sofar, d));
                cur_order.pop_back();
                return;
            }
        }

        // branch by ascending degree
        std::vector<std::pair<int, int>> cands;
        msk = remaining;
        while (msk) {
            int v = __builtin_ctz(msk);
            msk &= msk - 1;
            cands.emplace_back(__builtin_popcount(adj[size_t(v)] & remaining), v);
        }
        std::sort(cands.begin(), cands.end());
        for (auto &[d, v] : cands) {
            if (std::max(sofar, d) >= best_width) break;
            auto next = adj;
            std::uint32_t nb = adj[size_t(v)] & remaining;
            std::uint32_t t = nb;
            while (t) {
                int u = __builtin_ctz(t);
                t &= t - 1;
                next[size_t(u)] |= nb & ~(std::uint32_t(1) << u);
            }
            cur_order.push_back(v);
            run(std::move(next), remaining & ~(std::uint32_t(1) << v), std::max(sofar, d));
            cur_order.pop_back();
        }
    }

    void finish(std::uint32_t remaining, int width) {
        if (width >= best_width) return;
        best_width = width;
        best_order = cur_order;
        std::uint32_t t = remaining;
        while (t) {
            best_order.push_back(__builtin_ctz(t));
            t &= t - 1;
        }
    }
};

// Decomposition from an elimination order of the component graph; bags use
// original vertex ids. Returns node ids within `td` (one per vertex, in
// elimination order), linking each bag to the one of the first later
// eliminated neighbor.
int td_from_order(TreeDecomposition &td, const MaskGraph &g, const std::vector<int> &order) {
    int n = g.n;
    std::vector<std::uint32_t> adj = g.adj;
    std::vector<int> pos(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) pos[size_t(order[size_t(i)])] = i;
    std::vector<int> node_of(static_cast<size_t>(n));
    std::vector<std::uint32_t> nb_at(static_cast<size_t>(n));
    std::uint32_t remaining = (n == 32) ? ~0u : ((std::uint32_t(1) << n) - 1);
    for (int i = 0; i < n; ++i) {
        int v = order[size_t(i)];
        std::uint32_t nb = adj[size_t(v)] & remaining & ~(std::uint32_t(1) << v);
        nb_at[size_t(v)] = nb;
        std::vector<int> bag;
        bag.push_back(g.orig[size_t(v)]);
        std::uint32_t t = nb;
        while (t) {
            int u = __builtin_ctz(t);
            t &= t - 1;
            bag.push_back(g.orig[size_t(u)]);
        }
        node_of[size_t(v)] = td.add_node(std::move(bag));
        t = nb;
        while (t) {
            int u = __builtin_ctz(t);
            t &= t - 1;
            adj[size_t(u)] |= nb & ~(std::uint32_t(1) << u);
        }
        remaining &= ~(std::uint32_t(1) << v);
    }
    for (int i = 0; i < n; ++i) {
        int v = order[size_t(i)];
        std::uint32_t later = nb_at[size_t(v)];
        if (!later) {
            if (i + 1 < n) td.add_edge(node_of[size_t(v)], node_of[size_t(order[size_t(i) + 1])]);
            continue;
        }
        int first = -1;
        std::uint32_t t = later;
        while (t) {
            int u = __builtin_ctz(t);
            t &= t - 1;
            if (first == -1 || pos[size_t(u)] < pos[size_t(first)]) first = u;
        }
        td.add_edge(node_of[size_t(v)], node_of[size_t(first)]);
    }
    return node_of[size_t(order.back())];
}

std::vector<std::vector<int>> connected_components(const Graph &g) {
    std::vector<int> comp(size_t(g.n) + 1, 0);
    std::vector<std::vector<int>> out;
    for (int s = 1; s <= g.n; ++s) {
        if (comp[size_t(s)]) continue;
        out.emplace_back();
        std::vector<int> stack{s};
        comp[size_t(s)] = int(out.size());
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            out.back().push_back(v);
            for (int u : g.adj[size_t(v)])
                if (!comp[size_t(u)]) {
                    comp[size_t(u)] = int(out.size());
                    stack.push_back(u);
                }
        }
        std::sort(out.back().begin(), out.back().end());
    }
    return out;
}

std::pair<int, std::vector<int>> component_exact_order(const MaskGraph &mg) {
    if (mg.n <= 1) return {mg.n - 1, std::vector<int>(size_t(mg.n), 0)};
    if (mg.n <= 20) return tw_subset_dp(mg);
    // 21..25: branch and bound seeded with the min-fill order
    std::vector<int> mf_order;
    {
        std::vector<std::uint32_t> adj = mg.adj;
        std::uint32_t remaining = (std::uint32_t(1) << mg.n) - 1;
        while (remaining) {
            int bestv = -1;
            long bestfill = -1;
            std::uint32_t it = remaining;
            while (it) {
                int v = __builtin_ctz(it);
                it &= it - 1;
                std::uint32_t nb = adj[size_t(v)] & remaining & ~(std::uint32_t(1) << v);
                long fill = 0;
                std::uint32_t t = nb;
                while (t) {
                    int u = __builtin_ctz(t);
                    t &= t - 1;
                    fill += __builtin_popcount(nb & ~adj[size_t(u)] & ~(std::uint32_t(1) << u));
                }
                if (bestv == -1 || fill < bestfill) {
                    bestv = v;
                    bestfill = fill;
                }
            }
            std::uint32_t nb = adj[size_t(bestv)] & remaining & ~(std::uint32_t(1) << bestv);
            std::uint32_t t = nb;
            while (t) {
                int u = __builtin_ctz(t);
                t &= t - 1;
                adj[size_t(u)] |= nb & ~(std::uint32_t(1) << u);
            }
            mf_order.push_back(bestv);
            remaining &= ~(std::uint32_t(1) << bestv);
        }
    }
    int ub = 0;
    {
        std::vector<std::uint32_t> adj = mg.adj;
        std::uint32_t remaining = (std::uint32_t(1) << mg.n) - 1;
        for (int v : mf_order) {
            std::uint32_t nb = adj[size_t(v)] & remaining & ~(std::uint32_t(1) << v);
            ub = std::max(ub, __builtin_popcount(nb));
            std::uint32_t t = nb;
            while (t) {
                int u = __builtin_ctz(t);
                t &= t - 1;
                adj[size_t(u)] |= nb & ~(std::uint32_t(1) << u);
            }
            remaining &= ~(std::uint32_t(1) << v);
        }
    }
    int lb = greedy_clique(mg.adj) - 1;
    if (lb >= ub) return {ub, mf_order};
    TwBranchBound bb(mg, ub + 1, mf_order); // strictly-better search, mf order is the fallback
    bb.run(mg.adj, (std::uint32_t(1) << mg.n) - 1, 0);
    if (bb.best_width > ub) return {ub, mf_order};
    return {bb.best_width, bb.best_order};
}

} // namespace

std::pair<int, TreeDecomposition> exact_treewidth(const Graph &g) {
    if (g.n > kExactTreewidthCap)
        fail(ErrorKind::cap, "exact treewidth limited to " + std::to_string(kExactTreewidthCap) +
                                 " vertices (" + std::to_string(g.n) + " given); use the heuristic");
    TreeDecomposition td;
    if (g.n == 0) {
        td.add_node({});
        return {-1, td};
    }
    int width = -1;
    int prev_root = -1;
    for (auto &comp : connected_components(g)) {
        MaskGraph mg = to_mask_graph(g, comp);
        auto [w, order] = component_exact_order(mg);
        width = std::max(width, w);
        int root = td_from_order(td, mg, order);
        if (prev_root != -1) td.add_edge(prev_root, root);
        prev_root = root;
    }
    return {width, td};
}

TreeDecomposition minfill_td(const Graph &g) {
    TreeDecomposition td;
    if (g.n == 0) {
        td.add_node({});
        return td;
    }
    int n = g.n;
    std::vector<Bitset> adj(size_t(n) + 1, Bitset(std::uint64_t(n) + 1));
    for (auto &[u, v] : g.edges) {
        adj[size_t(u)].set(std::uint64_t(v));
        adj[size_t(v)].set(std::uint64_t(u));
    }
    std::vector<char> gone(size_t(n) + 1, 0);
    std::vector<int> order;
    std::vector<std::vector<int>> bag_of(size_t(n) + 1);
    for (int step = 0; step < n; ++step) {
        int bestv = -1;
        long bestfill = -1;
        for (int v = 1; v <= n; ++v) {
            if (gone[size_t(v)]) continue;
            std::vector<int> nb;
            for (std::uint64_t u = adj[size_t(v)].find_first(); u < adj[size_t(v)].size();
                 u = adj[size_t(v)].find_next(u))
                if (!gone[u]) nb.push_back(int(u));
            long fill = 0;
            for (size_t i = 0; i < nb.size(); ++i)
                for (size_t j = i + 1; j < nb.size(); ++j)
                    if (!adj[size_t(nb[i])].get(std::uint64_t(nb[j]))) ++fill;
            if (bestv == -1 || fill < bestfill) { // ties keep the lowest id
                bestv = v;
                bestfill = fill;
            }
        }
        std::vector<int> nb;
        for (std::uint64_t u = adj[size_t(bestv)].find_first(); u < adj[size_t(bestv)].size();
             u = adj[size_t(bestv)].find_next(u))
            if (!gone[u]) nb.push_back(int(u));
        for (size_t i = 0; i < nb.size(); ++i)
            for (size_t j = i + 1; j < nb.size(); ++j) {
                adj[size_t(nb[i])].set(std::uint64_t(nb[j]));
                adj[size_t(nb[j])].set(std::uint64_t(nb[i]));
            }
        bag_of[size_t(bestv)] = nb;
        bag_of[size_t(bestv)].push_back(bestv);
        order.push_back(bestv);
        gone[size_t(bestv)] = 1;
    }
    std::vector<int> pos(size_t(n) + 1);
    std::vector<int> node_of(size_t(n) + 1);
    for (size_t i = 0; i < order.size(); ++i) pos[size_t(order[i])] = int(i);
    for (int i = 0; i < n; ++i) node_of[size_t(order[size_t(i)])] = td.add_node(bag_of[size_t(order[size_t(i)])]);
    for (int i = 0; i < n; ++i) {
        int v = order[size_t(i)];
        int first = -1;
        for (int u : bag_of[size_t(v)])
            if (u != v && (first == -1 || pos[size_t(u)] < pos[size_t(first)])) first = u;
        if (first != -1 && pos[size_t(first)] > i) td.add_edge(node_of[size_t(v)], node_of[size_t(first)]);
        else if (i + 1 < n) td.add_edge(node_of[size_t(v)], node_of[size_t(order[size_t(i) + 1])]);
    }
    return td;
}

int max_clique(const Graph &g) {
    if (g.n == 0) return 0;
    if (g.n > 64) {
        // greedy only; callers treat the result as a lower bound
        int best = 1;
        for (int s = 1; s <= g.n; ++s) {
            std::vector<int> clique{s};
            std::vector<int> cand = g.adj[size_t(s)];
            while (!cand.empty()) {
                int pick = cand[0];
                clique.push_back(pick);
                std::vector<int> next;
                for (int u : cand)
                    if (u != pick && g.has_edge(u, pick)) next.push_back(u);
                cand = std::move(next);
            }
            best = std::max(best, int(clique.size()));
        }
        return best;
    }
    int n = g.n;
    std::vector<std::uint64_t> adj(size_t(n), 0);
    for (auto &[u, v] : g.edges) {
        adj[size_t(u) - 1] |= std::uint64_t(1) << (v - 1);
        adj[size_t(v) - 1] |= std::uint64_t(1) << (u - 1);
    }
    int best = 0;
    // Tomita-style branch and bound with greedy coloring bound
    struct Rec {
        const std::vector<std::uint64_t> &adj;
        int &best;
        void expand(std::uint64_t cand, int size) {
            if (!cand) {
                best = std::max(best, size);
                return;
            }
            // greedy coloring of cand for an upper bound and branch order
            std::vector<std::pair<int, int>> colored; // (color, vertex)
            std::uint64_t un = cand;
            int color = 0;
            while (un) {
                ++color;
                std::uint64_t avail = un;
                while (avail) {
                    int v = __builtin_ctzll(avail);
                    colored.emplace_back(color, v);
                    avail &= ~(adj[size_t(v)] | (std::uint64_t(1) << v));
                    un &= ~(std::uint64_t(1) << v);
                }
            }
            for (int i = int(colored.size()) - 1; i >= 0; --i) {
                auto [c, v] = colored[size_t(i)];
                if (size + c <= best) return;
                expand(cand & adj[size_t(v)], size + 1);
                cand &= ~(std::uint64_t(1) << v);
            }
        }
    } rec{adj, best};
    rec.expand((n == 64) ? ~std::uint64_t(0) : ((std::uint64_t(1) << n) - 1), 0);
    return best;
}

TreeDecomposition make_special(const Graph &g, const TreeDecomposition &t) {
    validate_td(g, t);
    if (is_special_td(g, t)) {
        TreeDecomposition out = t;
        out.special = true;
        return out;
    }
    // Reroute everything onto one spine: lay the bags out in preorder and
    // extend each vertex's occurrence to a contiguous interval. Preorder keeps
    // each subtree contiguous, so the extension stays inside the subtree below
    // the vertex's topmost bag and validity is preserved.
    auto children = t.children_of(1);
    std::vector<int> pre;
    std::vector<int> stack{1};
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        pre.push_back(x);
        auto ch = children[size_t(x)];
        for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
    }
    int m = int(pre.size());
    std::vector<int> first(size_t(g.n) + 1, -1), last(size_t(g.n) + 1, -1);
    for (int i = 0; i < m; ++i)
        for (int v : t.bags[size_t(pre[size_t(i)])]) {
            if (first[size_t(v)] == -1) first[size_t(v)] = i;
            last[size_t(v)] = i;
        }
    TreeDecomposition out;
    out.special = true;
    for (int i = 0; i < m; ++i) {
        std::vector<int> bag;
        for (int v = 1; v <= g.n; ++v)
            if (first[size_t(v)] != -1 && first[size_t(v)] <= i && i <= last[size_t(v)])
                bag.push_back(v);
        out.add_node(std::move(bag));
        if (i > 0) out.add_edge(i, i + 1);
    }
    return out;
}

WidthMeasure measure_treewidth(const Graph &g) {
    WidthMeasure m;
    if (g.n <= kExactTreewidthCap) {
        auto [w, td] = exact_treewidth(g);
        m.value = w;
        m.quality = WidthQuality::exact;
        m.witness = std::move(td);
        return m;
    }
    m.witness = minfill_td(g);
    m.value = m.witness.width();
    m.quality = WidthQuality::upper_bound;
    int clique = max_clique(g);
    if (g.n <= 64 && clique - 1 == m.value) m.quality = WidthQuality::exact;
    return m;
}

WidthReport width_report(const CnfFormula &f) {
    WidthReport r;
    r.tw_p = measure_treewidth(primal_graph(f));
    r.tw_d = measure_treewidth(dual_graph(f));
    r.tw_i = measure_treewidth(incidence_graph(f));
    r.mtw = measure_treewidth(module_contraction(incidence_graph(f)).graph);
    return r;
}

} // namespace widthforge
