#pragma once

#include <optional>
#include <utility>

#include "widthforge/bitset.hpp"
#include "widthforge/cnf.hpp"
#include "widthforge/function_spec.hpp"

namespace widthforge {

// Worker cap for brute-force enumeration, from WIDTHFORGE_THREADS (default 1).
int worker_count();

bool eval(const CnfFormula &f, const Assignment &a);

// All satisfying total assignments of F, one bit per assignment over all of
// F's variables (smallest id = most significant index bit).
struct ModelSet {
    int num_vars = 0;
    Bitset set;

    std::uint64_t row_of(const Assignment &a) const;
    Assignment assignment_of(std::uint64_t row) const;
};

ModelSet models(const CnfFormula &f);

// Existential projection of the model set onto the input variables.
FunctionSpec project_models(const CnfFormula &f);

struct ClausalCheck {
    bool ok = false;
    // On failure: an input assignment witnessing the defect (either an onset
    // row with no satisfying extension or an offset row with one).
    std::optional<Assignment> counterexample;
};

ClausalCheck is_clausal_encoding(const CnfFormula &f, const FunctionSpec &spec);

struct DependentAuxCheck {
    bool ok = false;
    // On failure: two models agreeing on the inputs but not on the aux vars.
    std::optional<std::pair<Assignment, Assignment>> witness;
};

DependentAuxCheck has_dependent_aux(const CnfFormula &f);

} // namespace widthforge
