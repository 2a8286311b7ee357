#include "widthforge/oracle.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

namespace widthforge {

int worker_count() {
    static int cached = [] {
        const char *env = std::getenv("WIDTHFORGE_THREADS");
        if (!env) return 1;
        int n = std::atoi(env);
        return n < 1 ? 1 : std::min(n, 64);
    }();
    return cached;
}

bool eval(const CnfFormula &f, const Assignment &a) {
    if (a.num_vars() < f.num_vars)
        fail(ErrorKind::invalid, "assignment is not total over the formula's variables");
    for (const Clause &c : f.clauses) {
        if (c.tautological) continue;
        bool sat = false;
        for (Lit l : c.lits)
            if (a[lit_var(l)] == lit_positive(l)) {
                sat = true;
                break;
            }
        if (!sat) return false;
    }
    return true;
}

std::uint64_t ModelSet::row_of(const Assignment &a) const {
    std::uint64_t row = 0;
    for (Var v = 1; v <= num_vars; ++v)
        if (a[v]) row |= std::uint64_t(1) << (num_vars - v);
    return row;
}

Assignment ModelSet::assignment_of(std::uint64_t row) const {
    Assignment a(num_vars);
    for (Var v = 1; v <= num_vars; ++v) a.set(v, (row >> (num_vars - v)) & 1);
    return a;
}

namespace {

// Clears all assignments falsifying the clause within rows
// [slab_base, slab_base + 2^slab_bits): those with every positive variable 0
// and every negative variable 1. Bit position of var v is n - v.
void clear_falsifying(Bitset &set, int n, const Clause &c, std::uint64_t slab_base,
                      int slab_bits) {
    std::uint64_t ones = 0, fixed = 0;
    for (Lit l : c.lits) {
        std::uint64_t bit = std::uint64_t(1) << (n - lit_var(l));
        fixed |= bit;
        if (!lit_positive(l)) ones |= bit;
    }
    std::uint64_t slab_mask = slab_bits >= 64 ? ~std::uint64_t(0)
                                              : ((std::uint64_t(1) << slab_bits) - 1);
    std::uint64_t high_fixed = fixed & ~slab_mask;
    if ((ones & high_fixed) != (slab_base & high_fixed)) return; // subcube misses slab
    std::uint64_t base = slab_base | (ones & slab_mask);
    std::uint64_t free_mask = slab_mask & ~fixed;
    std::uint64_t s = 0;
    while (true) {
        set.clear(base | s);
        s = (s - free_mask) & free_mask;
        if (s == 0) break;
    }
}

} // namespace

ModelSet models(const CnfFormula &f) {
    int n = f.num_vars;
    if (n > kBruteForceVarCap)
        fail(ErrorKind::cap, "model enumeration over " + std::to_string(n) +
                                 " variables exceeds the " + std::to_string(kBruteForceVarCap) +
                                 "-variable cap");
    ModelSet ms;
    ms.num_vars = n;
    for (const Clause &c : f.clauses)
        if (c.lits.empty() && !c.tautological) {
            ms.set = Bitset(std::uint64_t(1) << n, false);
            return ms; // empty clause: unsatisfiable
        }
    ms.set = Bitset(std::uint64_t(1) << n, true);

    int workers = worker_count();
    int top_bits = 0;
    while ((1 << top_bits) < workers && top_bits < n - 10) ++top_bits;
    if (top_bits == 0 || n < 16) {
        for (const Clause &c : f.clauses)
            if (!c.tautological) clear_falsifying(ms.set, n, c, 0, n);
        return ms;
    }
    // Split on the top bits so each worker owns a word-aligned slab.
    int slab_bits = n - top_bits;
    std::vector<std::thread> pool;
    for (int w = 0; w < (1 << top_bits); ++w) {
        pool.emplace_back([&, w] {
            std::uint64_t slab_base = std::uint64_t(w) << slab_bits;
            for (const Clause &c : f.clauses)
                if (!c.tautological) clear_falsifying(ms.set, n, c, slab_base, slab_bits);
        });
    }
    for (auto &t : pool) t.join();
    return ms;
}

namespace {

struct Projection {
    int n = 0;                 // total vars
    std::vector<int> in_vars;  // ascending input ids
    bool contiguous = false;   // inputs are exactly 1..m (aux occupy low bits)
    int aux_bits = 0;

    explicit Projection(const CnfFormula &f) {
        n = f.num_vars;
        for (Var v = 1; v <= f.num_vars; ++v)
            if (!f.is_aux[size_t(v)]) in_vars.push_back(v);
        int m = int(in_vars.size());
        contiguous = true;
        for (int i = 0; i < m; ++i) contiguous = contiguous && in_vars[size_t(i)] == i + 1;
        aux_bits = n - m;
    }

    std::uint64_t project(std::uint64_t row) const {
        if (contiguous) return row >> aux_bits;
        std::uint64_t out = 0;
        int m = int(in_vars.size());
        for (int i = 0; i < m; ++i)
            out |= ((row >> (n - in_vars[size_t(i)])) & 1) << (m - 1 - i);
        return out;
    }
};

} // namespace

FunctionSpec project_models(const CnfFormula &f) {
    ModelSet ms = models(f);
    Projection pr(f);
    int m = int(pr.in_vars.size());
    Bitset onset(std::uint64_t(1) << m, false);
    if (pr.contiguous && pr.aux_bits >= 6) {
        // aux vars occupy whole low words: OR-reduce each block
        const auto &words = ms.set.words();
        std::uint64_t words_per_block = (std::uint64_t(1) << pr.aux_bits) / 64;
        for (std::uint64_t b = 0; b < (std::uint64_t(1) << m); ++b) {
            std::uint64_t any = 0;
            for (std::uint64_t w = 0; w < words_per_block && !any; ++w)
                any = words[b * words_per_block + w];
            if (any) onset.set(b);
        }
    } else {
        for (std::uint64_t r = ms.set.find_first(); r < ms.set.size(); r = ms.set.find_next(r))
            onset.set(pr.project(r));
    }
    FunctionSpec spec(pr.in_vars, std::move(onset));
    for (size_t i = 0; i < spec.vars.size(); ++i)
        spec.var_names[i] = f.var_name(spec.vars[i]);
    return spec;
}

ClausalCheck is_clausal_encoding(const CnfFormula &f, const FunctionSpec &spec) {
    auto inputs = f.input_vars();
    if (inputs != spec.vars)
        fail(ErrorKind::invalid, "input variables of the formula and the spec differ");
    FunctionSpec projected = project_models(f);
    ClausalCheck res;
    if (projected.onset == spec.onset) {
        res.ok = true;
        return res;
    }
    for (std::uint64_t r = 0; r < spec.num_rows(); ++r)
        if (projected.onset.get(r) != spec.onset.get(r)) {
            res.counterexample = spec.assignment_of(r);
            break;
        }
    return res;
}

DependentAuxCheck has_dependent_aux(const CnfFormula &f) {
    ModelSet ms = models(f);
    Projection pr(f);
    int m = int(pr.in_vars.size());
    DependentAuxCheck res;
    Bitset seen(std::uint64_t(1) << m, false);
    for (std::uint64_t r = ms.set.find_first(); r < ms.set.size(); r = ms.set.find_next(r)) {
        std::uint64_t p = pr.project(r);
        if (seen.get(p)) {
            // rescan for the earlier model with the same input part
            for (std::uint64_t r0 = ms.set.find_first(); r0 < r; r0 = ms.set.find_next(r0))
                if (pr.project(r0) == p) {
                    res.witness = {ms.assignment_of(r0), ms.assignment_of(r)};
                    return res;
                }
        }
        seen.set(p);
    }
    res.ok = true;
    return res;
}

} // namespace widthforge
