#include "widthforge/comm.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

namespace widthforge {

namespace {

constexpr int kCoverVarCap = 16;
constexpr int kBestVarCap = 14;
constexpr size_t kRectangleCap = 200000;
constexpr std::uint64_t kCoverNodeCap = 20000000;

struct MatrixView {
    std::vector<int> ybit, zbit; // spec row bit position per side variable
    int my = 0, mz = 0;
    std::vector<Bitset> row_support; // per Y-assignment: onset columns

    MatrixView(const FunctionSpec &spec, const Partition &pi) {
        int m = spec.num_vars();
        std::map<Var, int> pos;
        for (int i = 0; i < m; ++i) pos[spec.vars[size_t(i)]] = m - 1 - i;
        my = int(pi.y.size());
        mz = int(pi.z.size());
        for (size_t j = 0; j < pi.y.size(); ++j) ybit.push_back(pos.at(pi.y[j]));
        for (size_t j = 0; j < pi.z.size(); ++j) zbit.push_back(pos.at(pi.z[j]));
        row_support.assign(size_t(1) << my, Bitset(std::uint64_t(1) << mz));
        for (std::uint64_t r = spec.onset.find_first(); r < spec.onset.size();
             r = spec.onset.find_next(r)) {
            std::uint64_t ra = 0, ca = 0;
            for (int j = 0; j < my; ++j)
                if ((r >> ybit[size_t(j)]) & 1) ra |= std::uint64_t(1) << (my - 1 - j);
            for (int j = 0; j < mz; ++j)
                if ((r >> zbit[size_t(j)]) & 1) ca |= std::uint64_t(1) << (mz - 1 - j);
            row_support[ra].set(ca);
        }
    }

    std::uint64_t spec_row(std::uint64_t ra, std::uint64_t ca) const {
        std::uint64_t r = 0;
        for (int j = 0; j < my; ++j)
            if ((ra >> (my - 1 - j)) & 1) r |= std::uint64_t(1) << ybit[size_t(j)];
        for (int j = 0; j < mz; ++j)
            if ((ca >> (mz - 1 - j)) & 1) r |= std::uint64_t(1) << zbit[size_t(j)];
        return r;
    }
};

} // namespace

Partition Partition::of(const FunctionSpec &spec, std::vector<Var> y_side) {
    std::sort(y_side.begin(), y_side.end());
    Partition p;
    for (Var v : spec.vars) {
        if (std::binary_search(y_side.begin(), y_side.end(), v)) p.y.push_back(v);
        else p.z.push_back(v);
    }
    if (p.y.size() != y_side.size())
        fail(ErrorKind::invalid, "partition side mentions a variable outside the spec");
    return p;
}

CoverResult min_rectangle_cover(const FunctionSpec &spec, const Partition &pi) {
    if (spec.num_vars() > kCoverVarCap)
        fail(ErrorKind::cap, "rectangle covers limited to " + std::to_string(kCoverVarCap) +
                                 " variables");
    if (int(pi.y.size() + pi.z.size()) != spec.num_vars())
        fail(ErrorKind::invalid, "partition does not split the spec's variables");
    CoverResult res;
    if (!spec.onset.any()) {
        res.empty_onset = true;
        return res;
    }
    MatrixView mv(spec, pi);

    // maximal rectangles: closure of the row supports under intersection
    std::vector<Bitset> closed;
    std::map<std::vector<std::uint64_t>, int> seen;
    std::vector<Bitset> seeds;
    for (auto &s : mv.row_support)
        if (s.any() && seen.emplace(s.words(), 1).second) seeds.push_back(s);
    closed = seeds;
    for (size_t i = 0; i < closed.size(); ++i) {
        for (const Bitset &s : seeds) {
            Bitset inter = closed[i];
            inter &= s;
            if (!inter.any()) continue;
            if (seen.emplace(inter.words(), 1).second) {
                closed.push_back(inter);
                if (closed.size() > kRectangleCap)
                    fail(ErrorKind::cap, "maximal-rectangle closure is too large");
            }
        }
    }
    struct Rect {
        Bitset rows, cols;
        std::uint64_t weight = 0;
    };
    std::vector<Rect> rects;
    for (const Bitset &c : closed) {
        Rect r{Bitset(std::uint64_t(1) << mv.my), c, 0};
        std::uint64_t nrows = 0;
        for (std::uint64_t ra = 0; ra < r.rows.size(); ++ra) {
            // c subseteq support(ra)?
            bool inside = true;
            for (size_t w = 0; w < c.words().size() && inside; ++w)
                inside = (c.words()[w] & ~mv.row_support[ra].words()[w]) == 0;
            if (inside) {
                r.rows.set(ra);
                ++nrows;
            }
        }
        r.weight = nrows * c.count();
        rects.push_back(std::move(r));
    }

    // cell universe and per-cell candidate rectangles
    std::vector<std::pair<std::uint64_t, std::uint64_t>> cells;
    for (std::uint64_t ra = 0; ra < (std::uint64_t(1) << mv.my); ++ra)
        for (std::uint64_t ca = mv.row_support[ra].find_first(); ca < mv.row_support[ra].size();
             ca = mv.row_support[ra].find_next(ca))
            cells.emplace_back(ra, ca);
    size_t ncells = cells.size();
    std::vector<std::vector<int>> covers(ncells);
    for (int ri = 0; ri < int(rects.size()); ++ri)
        for (size_t ci = 0; ci < ncells; ++ci)
            if (rects[size_t(ri)].rows.get(cells[ci].first) &&
                rects[size_t(ri)].cols.get(cells[ci].second))
                covers[ci].push_back(ri);

    // greedy upper bound
    std::vector<int> greedy;
    {
        Bitset covered(ncells);
        while (covered.count() < ncells) {
            int best = -1;
            std::uint64_t gain_best = 0;
            for (int ri = 0; ri < int(rects.size()); ++ri) {
                std::uint64_t gain = 0;
                for (size_t ci = 0; ci < ncells; ++ci)
                    if (!covered.get(ci) && rects[size_t(ri)].rows.get(cells[ci].first) &&
                        rects[size_t(ri)].cols.get(cells[ci].second))
                        ++gain;
                if (gain > gain_best) {
                    gain_best = gain;
                    best = ri;
                }
            }
            greedy.push_back(best);
            for (size_t ci = 0; ci < ncells; ++ci)
                if (rects[size_t(best)].rows.get(cells[ci].first) &&
                    rects[size_t(best)].cols.get(cells[ci].second))
                    covered.set(ci);
        }
    }

    // exact search: branch on the least-coverable uncovered cell
    std::vector<int> best_sol = greedy;
    std::vector<int> cur;
    std::vector<int> cover_count(ncells, 0);
    std::uint64_t nodes = 0;
    std::uint64_t max_weight = 1;
    for (auto &r : rects) max_weight = std::max(max_weight, r.weight);
    std::function<void(size_t)> search = [&](size_t covered_cnt) {
        if (++nodes > kCoverNodeCap)
            fail(ErrorKind::cap, "set-cover search exceeded its node budget");
        if (covered_cnt == ncells) {
            if (cur.size() < best_sol.size()) best_sol = cur;
            return;
        }
        std::uint64_t remaining = ncells - covered_cnt;
        std::uint64_t lb = (remaining + max_weight - 1) / max_weight;
        if (cur.size() + lb >= best_sol.size()) return;
        // least-coverable uncovered cell
        size_t pick = ncells;
        for (size_t ci = 0; ci < ncells; ++ci) {
            if (cover_count[ci]) continue;
            if (pick == ncells || covers[ci].size() < covers[pick].size()) pick = ci;
        }
        for (int ri : covers[pick]) {
            size_t newly = 0;
            for (size_t ci = 0; ci < ncells; ++ci)
                if (rects[size_t(ri)].rows.get(cells[ci].first) &&
                    rects[size_t(ri)].cols.get(cells[ci].second)) {
                    if (cover_count[ci]++ == 0) ++newly;
                }
            cur.push_back(ri);
            search(covered_cnt + newly);
            cur.pop_back();
            for (size_t ci = 0; ci < ncells; ++ci)
                if (rects[size_t(ri)].rows.get(cells[ci].first) &&
                    rects[size_t(ri)].cols.get(cells[ci].second))
                    --cover_count[ci];
        }
    };
    search(0);

    res.s_min = best_sol.size();
    res.cc = std::log2(double(res.s_min));
    for (int ri : best_sol) res.cover.push_back({rects[size_t(ri)].rows, rects[size_t(ri)].cols});
    return res;
}

BestCc cc_best_third(const FunctionSpec &spec) {
    int m = spec.num_vars();
    if (m > kBestVarCap)
        fail(ErrorKind::cap, "balanced-partition sweep limited to " + std::to_string(kBestVarCap) +
                                 " variables");
    BestCc best;
    if (!spec.onset.any()) {
        best.empty_onset = true;
        return best;
    }
    bool have = false;
    // the first variable stays on the Y side: (Y,Z) and (Z,Y) are equivalent
    for (std::uint32_t mask = 0; mask < (std::uint32_t(1) << m); ++mask) {
        if (!(mask & 1)) continue;
        int ysz = __builtin_popcount(mask);
        if (3 * std::min(ysz, m - ysz) < m) continue;
        std::vector<Var> ys;
        for (int i = 0; i < m; ++i)
            if ((mask >> i) & 1) ys.push_back(spec.vars[size_t(i)]);
        Partition pi = Partition::of(spec, ys);
        CoverResult r = min_rectangle_cover(spec, pi);
        if (!have || r.s_min < best.s_min ||
            (r.s_min == best.s_min && pi.y < best.argmin.y)) {
            best.s_min = r.s_min;
            best.cc = r.cc;
            best.argmin = pi;
            have = true;
        }
    }
    if (!have) fail(ErrorKind::invalid, "no 1/3-balanced partition exists");
    return best;
}

int width_lower_bound(const FunctionSpec &spec) {
    BestCc b = cc_best_third(spec);
    if (b.empty_onset) return 0;
    return ceil_log2(b.s_min);
}

std::vector<CutReport> cut_cc_audit(const StructuredDnnf &d, const FunctionSpec &spec) {
    if (d.is_trivial()) return {};
    auto vars = d.variables();
    if (vars != spec.vars)
        fail(ErrorKind::invalid, "circuit and spec variables differ");
    std::vector<CutReport> out;
    if (!spec.onset.any()) return out; // cc undefined on the empty onset
    std::vector<int> gate_count(d.vtree.nodes.size(), 0);
    for (const auto &g : d.gates) {
        if (g.kind == GateKind::or_gate) ++gate_count[size_t(g.vnode)];
        if (g.kind == GateKind::literal) ++gate_count[size_t(g.vnode)];
    }
    for (int t = 0; t < d.vtree.num_nodes(); ++t) {
        CutReport rep;
        rep.vtree_node = t;
        rep.gate_bound = gate_count[size_t(t)];
        Partition pi = Partition::of(spec, d.vtree.vars_below(t));
        CoverResult cov = min_rectangle_cover(spec, pi);
        rep.s_min = cov.s_min;
        rep.ok = std::uint64_t(rep.gate_bound) >= rep.s_min;
        out.push_back(rep);
    }
    return out;
}

FoolingResult fooling_set_bound(const FunctionSpec &spec, const Partition &pi,
                                const std::vector<Assignment> &candidates) {
    FoolingResult res;
    for (const Assignment &a : candidates)
        if (!spec.onset.get(spec.row_of(a)))
            fail(ErrorKind::invalid, "fooling candidate is not in the onset");
    auto mix = [&](const Assignment &ay, const Assignment &az) {
        Assignment m(std::max(ay.num_vars(), az.num_vars()));
        for (Var v : pi.y) m.set(v, ay[v]);
        for (Var v : pi.z) m.set(v, az[v]);
        return m;
    };
    for (size_t i = 0; i < candidates.size(); ++i)
        for (size_t j = i + 1; j < candidates.size(); ++j) {
            bool m1 = spec.onset.get(spec.row_of(mix(candidates[j], candidates[i])));
            bool m2 = spec.onset.get(spec.row_of(mix(candidates[i], candidates[j])));
            if (m1 && m2) {
                res.failing = {int(i), int(j)};
                return res;
            }
        }
    res.ok = true;
    res.bound = int(candidates.size());
    return res;
}

} // namespace widthforge
