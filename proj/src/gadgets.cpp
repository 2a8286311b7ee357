#include "widthforge/gadgets.hpp"

#include <algorithm>
#include <functional>

namespace widthforge {

namespace {

FunctionSpec table_from(int nvars, const std::function<bool(std::uint64_t)> &accept) {
    if (nvars > kBruteForceVarCap)
        fail(ErrorKind::cap, "explicit table over " + std::to_string(nvars) +
                                 " variables exceeds the cap");
    Bitset onset(std::uint64_t(1) << nvars);
    std::vector<Var> vars;
    for (int v = 1; v <= nvars; ++v) vars.push_back(v);
    for (std::uint64_t r = 0; r < onset.size(); ++r)
        if (accept(r)) onset.set(r);
    return FunctionSpec(vars, std::move(onset));
}

// bit of variable v (1-based among m) in a row index: smallest id = MSB
inline bool row_bit(std::uint64_t row, int m, int v) { return (row >> (m - v)) & 1; }

} // namespace

FunctionSpec atmostone_function(int n) {
    return table_from(n, [&](std::uint64_t r) { return __builtin_popcountll(r) <= 1; });
}

FunctionSpec cardinality_function(int n, int threshold) {
    return table_from(n, [&](std::uint64_t r) { return __builtin_popcountll(r) <= threshold; });
}

FunctionSpec eq_function(int n) {
    if (2 * n > kBruteForceVarCap) fail(ErrorKind::cap, "EQ table needs 2n <= 24");
    // variables x_1..x_n (ids 1..n) and y_1..y_n (ids n+1..2n)
    FunctionSpec s = table_from(2 * n, [&](std::uint64_t r) {
        for (int i = 1; i <= n; ++i)
            if (row_bit(r, 2 * n, i) != row_bit(r, 2 * n, n + i)) return false;
        return true;
    });
    for (int i = 0; i < n; ++i) {
        s.var_names[size_t(i)] = "x" + std::to_string(i + 1);
        s.var_names[size_t(n + i)] = "y" + std::to_string(i + 1);
    }
    return s;
}

FunctionSpec triangle_free_function(int n) {
    int m = n * (n - 1) / 2;
    if (m > kBruteForceVarCap) fail(ErrorKind::cap, "triangle-freeness needs C(n,2) <= 24");
    // edge variables e_{i,j} for 1 <= i < j <= n in lexicographic order
    std::vector<std::pair<int, int>> pairs;
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) pairs.emplace_back(i, j);
    auto edge_idx = [&](int i, int j) {
        if (i > j) std::swap(i, j);
        return int(std::lower_bound(pairs.begin(), pairs.end(), std::make_pair(i, j)) -
                   pairs.begin());
    };
    FunctionSpec s = table_from(m, [&](std::uint64_t r) {
        for (int a = 1; a <= n; ++a)
            for (int b = a + 1; b <= n; ++b)
                for (int c = b + 1; c <= n; ++c) {
                    bool ab = row_bit(r, m, edge_idx(a, b) + 1);
                    bool bc = row_bit(r, m, edge_idx(b, c) + 1);
                    bool ac = row_bit(r, m, edge_idx(a, c) + 1);
                    if (ab && bc && ac) return false;
                }
        return true;
    });
    for (size_t p = 0; p < pairs.size(); ++p)
        s.var_names[p] = "e" + std::to_string(pairs[p].first) + "_" + std::to_string(pairs[p].second);
    return s;
}

FunctionSpec perm_function(int n) {
    int m = n * n;
    if (m > kBruteForceVarCap) fail(ErrorKind::cap, "PERM table needs n^2 <= 24");
    return table_from(m, [&](std::uint64_t r) {
        for (int i = 0; i < n; ++i) {
            int row_ones = 0, col_ones = 0;
            for (int j = 0; j < n; ++j) {
                row_ones += row_bit(r, m, i * n + j + 1);
                col_ones += row_bit(r, m, j * n + i + 1);
            }
            if (row_ones != 1 || col_ones != 1) return false;
        }
        return true;
    });
}

GadgetOutput amo_naive(int n) {
    if (n < 1) fail(ErrorKind::invalid, "n must be positive");
    GadgetOutput out;
    out.formula.set_num_vars(n);
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) out.formula.add_clause({-i, -j});
    std::vector<int> bag;
    for (int v = 1; v <= n; ++v) bag.push_back(v);
    out.td_witness.add_node(bag);
    out.td_witness.special = true;
    out.blocks.add({}, bag, -1);
    if (n <= kBruteForceVarCap) out.spec = atmostone_function(n);
    return out;
}

GadgetOutput amo_ladder(int n) {
    if (n < 1) fail(ErrorKind::invalid, "n must be positive");
    GadgetOutput out;
    CnfFormula &f = out.formula;
    f.set_num_vars(2 * n + 1);
    auto y = [&](int i) { return n + 1 + i; }; // y_0..y_n at ids n+1..2n+1
    for (int i = 0; i <= n; ++i) {
        f.mark_aux(y(i));
        f.var_names[size_t(y(i))] = "y" + std::to_string(i);
    }
    f.add_clause({-y(0)}); // y_0 = 0, otherwise the all-zero input has two extensions
    for (int i = 1; i <= n; ++i) {
        f.add_clause({-y(i - 1), y(i)});       // validity
        f.add_clause({-i, -y(i - 1)});         // x_i -> not y_{i-1}
        f.add_clause({-i, y(i)});              // x_i -> y_i
        f.add_clause({i, y(i - 1), -y(i)});    // y_i rises only at an x_i
    }
    int prev = 0;
    for (int i = 1; i <= n; ++i) {
        int node = out.td_witness.add_node({y(i - 1), y(i), i});
        if (prev) out.td_witness.add_edge(prev, node);
        prev = node;
    }
    out.td_witness.special = true;
    int pb = out.blocks.add({y(0), y(1)}, {1}, -1);
    for (int i = 2; i <= n; ++i) pb = out.blocks.add({y(i)}, {i}, pb);
    if (f.num_vars <= kBruteForceVarCap) out.spec = atmostone_function(n);
    return out;
}

GadgetOutput cardinality_binary(int n, int threshold) {
    if (n < 1 || threshold < 0 || threshold > n)
        fail(ErrorKind::invalid, "need 1 <= n and 0 <= threshold <= n");
    GadgetOutput out;
    CnfFormula &f = out.formula;
    if (threshold == n) {
        // trivially true: no clauses, no auxiliaries
        f.set_num_vars(n);
        int prev = 0;
        for (int v = 1; v <= n; ++v) {
            int node = out.td_witness.add_node({v});
            if (prev) out.td_witness.add_edge(prev, node);
            prev = node;
        }
        out.td_witness.special = true;
        int pb = -1;
        for (int v = 1; v <= n; ++v) pb = out.blocks.add({}, {v}, pb);
        if (n <= kBruteForceVarCap) out.spec = cardinality_function(n, threshold);
        return out;
    }
    bool count_zeros = threshold > n / 2;
    // counting ones: clamp at threshold+1, accept all values < clamp;
    // counting zeros: clamp at n-threshold, accept only the clamp value
    int clamp = count_zeros ? (n - threshold) : (threshold + 1);
    int bits = std::max(1, ceil_log2(std::uint64_t(clamp) + 1));
    f.set_num_vars(n + n * bits);
    auto yv = [&](int j, int b) { return n + (j - 1) * bits + b + 1; }; // group j in 1..n
    for (int j = 1; j <= n; ++j)
        for (int b = 0; b < bits; ++b) {
            f.mark_aux(yv(j, b));
            f.var_names[size_t(yv(j, b))] = "s" + std::to_string(j) + "_" + std::to_string(b);
        }
    auto counted = [&](int x_value) { return count_zeros ? x_value == 0 : x_value == 1; };
    // initial group: S_1 = [x_1 counted], full table over {x_1} u Y^1
    for (int xv = 0; xv <= 1; ++xv)
        for (int s1 = 0; s1 < (1 << bits); ++s1) {
            if (s1 == (counted(xv) ? 1 : 0)) continue;
            std::vector<Lit> lits{xv ? -1 : 1};
            for (int b = 0; b < bits; ++b) lits.push_back(((s1 >> b) & 1) ? -yv(1, b) : yv(1, b));
            f.add_clause(std::move(lits));
        }
    // transitions: S_{j+1} = min(clamp, S_j + counted(x_{j+1}))
    for (int j = 1; j < n; ++j) {
        for (int prev = 0; prev < (1 << bits); ++prev)
            for (int xv = 0; xv <= 1; ++xv) {
                int next_ok = prev > clamp ? -1 : std::min(clamp, prev + (counted(xv) ? 1 : 0));
                for (int next = 0; next < (1 << bits); ++next) {
                    if (next == next_ok) continue;
                    std::vector<Lit> lits{xv ? -(j + 1) : (j + 1)};
                    for (int b = 0; b < bits; ++b)
                        lits.push_back(((prev >> b) & 1) ? -yv(j, b) : yv(j, b));
                    for (int b = 0; b < bits; ++b)
                        lits.push_back(((next >> b) & 1) ? -yv(j + 1, b) : yv(j + 1, b));
                    f.add_clause(std::move(lits));
                }
            }
    }
    // comparator on the final group
    for (int s = 0; s < (1 << bits); ++s) {
        bool accept = count_zeros ? (s == clamp) : (s <= threshold);
        if (accept) continue;
        std::vector<Lit> lits;
        for (int b = 0; b < bits; ++b) lits.push_back(((s >> b) & 1) ? -yv(n, b) : yv(n, b));
        f.add_clause(std::move(lits));
    }
    // path decomposition: bag_j = Y^j u Y^{j+1} u {x_{j+1}}, plus the head bag
    {
        std::vector<int> head{1};
        for (int b = 0; b < bits; ++b) head.push_back(yv(1, b));
        int prev = out.td_witness.add_node(head);
        for (int j = 1; j < n; ++j) {
            std::vector<int> bag{j + 1};
            for (int b = 0; b < bits; ++b) {
                bag.push_back(yv(j, b));
                bag.push_back(yv(j + 1, b));
            }
            int node = out.td_witness.add_node(bag);
            out.td_witness.add_edge(prev, node);
            prev = node;
        }
        out.td_witness.special = true;
    }
    {
        std::vector<Var> aux;
        for (int b = 0; b < bits; ++b) aux.push_back(yv(1, b));
        int pb = out.blocks.add(aux, {1}, -1);
        for (int j = 2; j <= n; ++j) {
            aux.clear();
            for (int b = 0; b < bits; ++b) aux.push_back(yv(j, b));
            pb = out.blocks.add(aux, {j}, pb);
        }
    }
    if (f.num_vars <= kBruteForceVarCap) out.spec = cardinality_function(n, threshold);
    return out;
}

GadgetOutput perm_encoding(int n) {
    if (n < 1) fail(ErrorKind::invalid, "n must be positive");
    GadgetOutput out;
    CnfFormula &f = out.formula;
    // inputs x_{ij} at (i-1)*n+j; per-row prefix bits r^i_1..n; column memory
    // c^i_j for row boundaries i in 1..n-1
    int x0 = 0, r0 = n * n, c0 = n * n + n * n;
    f.set_num_vars(n * n + n * n + (n - 1) * n);
    auto X = [&](int i, int j) { return x0 + (i - 1) * n + j; };
    auto R = [&](int i, int j) { return r0 + (i - 1) * n + j; };
    auto C = [&](int i, int j) { return c0 + (i - 1) * n + j; };
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            f.var_names[size_t(X(i, j))] = "x" + std::to_string(i) + "_" + std::to_string(j);
            f.mark_aux(R(i, j));
            f.var_names[size_t(R(i, j))] = "r" + std::to_string(i) + "_" + std::to_string(j);
            if (i < n) {
                f.mark_aux(C(i, j));
                f.var_names[size_t(C(i, j))] = "c" + std::to_string(i) + "_" + std::to_string(j);
            }
        }
    for (int i = 1; i <= n; ++i) {
        // ladder exactly-one over the row: r^i_j is the prefix disjunction
        f.add_clause({-X(i, 1), R(i, 1)});
        f.add_clause({X(i, 1), -R(i, 1)});
        for (int j = 2; j <= n; ++j) {
            f.add_clause({-R(i, j - 1), R(i, j)});       // monotone
            f.add_clause({-X(i, j), -R(i, j - 1)});      // no second one
            f.add_clause({-X(i, j), R(i, j)});
            f.add_clause({X(i, j), R(i, j - 1), -R(i, j)});
        }
        f.add_clause({R(i, n)}); // at least one per row
    }
    for (int j = 1; j <= n; ++j) {
        if (n == 1) {
            f.add_clause({X(1, 1)});
            break;
        }
        // column memory: c^1 = x_{1j}; c^i = c^{i-1} or x_{ij}, conflicts barred
        f.add_clause({-X(1, j), C(1, j)});
        f.add_clause({X(1, j), -C(1, j)});
        for (int i = 2; i < n; ++i) {
            f.add_clause({-C(i - 1, j), -X(i, j)});
            f.add_clause({-C(i - 1, j), C(i, j)});
            f.add_clause({-X(i, j), C(i, j)});
            f.add_clause({C(i - 1, j), X(i, j), -C(i, j)});
        }
        f.add_clause({-C(n - 1, j), -X(n, j)}); // no second one in the column
        f.add_clause({C(n - 1, j), X(n, j)});   // at least one in the column
    }
    // path decomposition sweeping rows left to right
    {
        int prev = 0;
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n; ++j) {
                std::vector<int> bag{X(i, j), R(i, j)};
                if (j > 1) bag.push_back(R(i, j - 1));
                if (n > 1) {
                    // incoming memory suffix and outgoing prefix
                    for (int l = j; l <= n; ++l)
                        if (i >= 2) bag.push_back(C(i - 1, l));
                    for (int l = 1; l <= j; ++l)
                        if (i < n) bag.push_back(C(i, l));
                }
                int node = out.td_witness.add_node(bag);
                if (prev) out.td_witness.add_edge(prev, node);
                prev = node;
            }
        out.td_witness.special = true;
    }
    if (f.num_vars <= kBruteForceVarCap) out.spec = perm_function(n);
    return out;
}

} // namespace widthforge
