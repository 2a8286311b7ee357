#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "widthforge/cnf.hpp"
#include "widthforge/function_spec.hpp"

namespace widthforge {

// Full binary tree with leaves labeled bijectively by variables.
struct VTree {
    struct Node {
        int left = -1, right = -1; // -1 for leaves
        Var var = 0;               // leaf label, 0 for internal nodes
    };
    std::vector<Node> nodes;
    int root = -1;

    int add_leaf(Var v);
    int add_internal(int left, int right);
    bool is_leaf(int id) const { return nodes[size_t(id)].left == -1; }
    int num_nodes() const { return int(nodes.size()); }
    std::vector<Var> vars() const;          // ascending leaf labels
    std::vector<Var> vars_below(int id) const;
    void validate() const;                  // full binary, distinct leaf labels
};

enum class GateKind : unsigned char { literal, and_gate, or_gate };

// Complete structured DNNF. Gates live in vtree-node blocks (mu); and-gates
// have exactly two inputs sitting at the two children of their node, or-gate
// inputs are and-gates of the same node, literal gates sit at leaves.
// Constant gates are not representable; the constant functions are carried by
// the trivial marker instead.
struct StructuredDnnf {
    struct Gate {
        GateKind kind;
        Lit lit = 0;             // literal gates
        std::vector<int> inputs; // and: exactly 2; or: >= 1
        int vnode = -1;          // mu
    };

    enum class Trivial : unsigned char { none, const_true, const_false };
    enum class Determinism : unsigned char { unknown, verified };

    VTree vtree;
    std::vector<Gate> gates;
    int output = -1;
    Trivial trivial = Trivial::none;
    std::vector<Var> trivial_vars; // variable scope of a marker object
    Determinism det = Determinism::unknown;

    bool is_trivial() const { return trivial != Trivial::none; }
    std::vector<Var> variables() const;
    int num_vars() const { return int(variables().size()); }

    static StructuredDnnf make_trivial(Trivial kind, std::vector<Var> vars);
};

// Checks every structural invariant; returns the width (max or-gates per
// vtree node). Violations name the offending gate.
int validate_dnnf(const StructuredDnnf &d);
int dnnf_width(const StructuredDnnf &d); // width only, assumes valid

bool evaluate(const StructuredDnnf &d, const Assignment &a);

// Truth table over the circuit's variables (ascending ids), <= 24 vars.
FunctionSpec dnnf_table(const StructuredDnnf &d);

struct DeterminismCheck {
    bool ok = false;
    int gate = -1;              // violating or-gate
    std::optional<Assignment> assignment;
};

// Brute force over all assignments and all or-gates (<= 24 leaf variables).
// A positive result also sets the circuit's verified flag via the return.
DeterminismCheck is_deterministic(const StructuredDnnf &d);
StructuredDnnf with_verified_determinism(StructuredDnnf d); // throws if check fails

// Existential quantification of a leaf variable; the leaf is removed from the
// v-tree and constants are propagated away. Width does not increase.
StructuredDnnf forget(const StructuredDnnf &d, Var z);

// Drops gates with no directed path to the output gate.
StructuredDnnf reduce(const StructuredDnnf &d);

struct ProofTreeCount {
    std::uint64_t value = 0;
    bool overflow = false;
};
ProofTreeCount count_proof_trees(const StructuredDnnf &d);

// Enumerates proof trees as sorted gate-id sets; returns false if aborted by
// the callback.
bool for_each_proof_tree(const StructuredDnnf &d,
                         const std::function<bool(const std::vector<int> &)> &fn);

// True iff no two onset rows of the table agree outside z and differ on z.
bool is_definable(const FunctionSpec &spec, Var z,
                  std::pair<std::uint64_t, std::uint64_t> *conflict = nullptr);

// Determinism-preserving forgetting: requires a reduced, verified-
// deterministic circuit and a definable variable; re-verifies the flag when
// the result is small enough to brute force.
StructuredDnnf forget_preserving_determinism(const StructuredDnnf &d, Var z);

// Line-oriented .sdnnf text format (v-tree section first, gates implicitly
// numbered in file order, output gate last).
StructuredDnnf parse_sdnnf(std::istream &in);
StructuredDnnf parse_sdnnf_string(const std::string &text);
StructuredDnnf parse_sdnnf_file(const std::string &path);
void write_sdnnf(const StructuredDnnf &d, std::ostream &out);
std::string write_sdnnf_string(const StructuredDnnf &d);
void write_sdnnf_file(const StructuredDnnf &d, const std::string &path);

} // namespace widthforge
