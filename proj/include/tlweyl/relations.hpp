#pragma once

// Evaluation of Weyl diagrams as natural-transformation matrices on
// Temperley-Lieb modules, and the relation verification suite.
//
// Two evaluators are provided and cross-checked against each other:
//  * an honest tower evaluator (apply_word / eval_elementary /
//    eval_diagram) that materializes induction as a concrete tensor-product
//    quotient and whiskers tile maps through induct_map — exact but only
//    practical at small levels;
//  * a standard-sum evaluator (std_eval) that decomposes every functor
//    application into simple summands tracked as label chains and evaluates
//    each tile once per (level, label) through cached realizations of
//    induction inside concrete Hom spaces.  Natural-transformation
//    components between standard summands are scalars (Schur), which makes
//    arbitrary-height diagrams cheap.

#include "tlweyl/rep.hpp"
#include "tlweyl/weyl.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tlweyl {

/// Right-to-left application of induct / restrict per sign; the zero module
/// as soon as a level dips below 0.  The returned tower retains
/// InductionData on induced layers.
ModuleRep apply_word(const SignWord &w, const ModuleRep &V);

/// Intermediate modules of apply_word: towers[i] = apply_word(last i chars).
std::vector<ModuleRep> word_tower(const SignWord &w, const ModuleRep &V);

struct NatTransComponent {
    SignWord source;
    SignWord target;
    int base_level = 0;
    Matrix mat; // dim apply_word(target, V)  x  dim apply_word(source, V)
};

/// Honest evaluation of a single tile placed at its depth inside `word`
/// (the word below the tile's slice), on base module V.
NatTransComponent eval_elementary(const Tile &t, const SignWord &word,
                                  const ModuleRep &V);

/// Honest evaluation of a formal diagram combination on V (simple or
/// regular).  Bubbles and dagger boxes are evaluated directly (isotypic
/// projector / inverse scalar), not macro-expanded.  Gate-zero terms
/// contribute zero; a box in an inadmissible region throws.
NatTransComponent eval_diagram(const FormalDiagram &D, const ModuleRep &V);
NatTransComponent eval_diagram(const WeylDiagram &D, const ModuleRep &V);

// ---------------------------------------------------------------------------
// Standard-sum evaluator.

/// One summand of a functor-word application to a simple module: the chain
/// of through-labels, chain[i] = label after applying the i innermost
/// signs (chain[0] = the base simple's label).
using LeafChain = std::vector<int>;

struct StdState {
    SignWord word;
    int base_level = 0;
    int base_label = 0;
    std::vector<LeafChain> leaves; // sorted, distinct
    /// mat(r, c): coefficient of target leaf r against source leaf c of the
    /// initial state (for diagram evaluation the source is the single leaf
    /// of the identity state on the source word).
    Matrix mat;
};

/// Identity state of a word on the simple W^n_m: one column per leaf of the
/// word's standard decomposition, identity matrix.
StdState std_identity(const SignWord &w, int n, int m);

/// Evaluate a diagram / formal combination on the simple W^n_m.  Region
/// tiles are evaluated directly (box = scalar, bubble = isotypic selector);
/// macro tiles are expanded.  Gate-zero diagrams give the zero state.
StdState std_eval(const WeylDiagram &D, int n, int m);
StdState std_eval(const FormalDiagram &D, int n, int m);

/// Exact equality of two states over the same word/module (leaves aligned,
/// missing leaves = zero rows).
bool std_equal(const StdState &a, const StdState &b);
/// First difference, for failure reporting ("" when equal).
std::string std_diff(const StdState &a, const StdState &b);

// ---------------------------------------------------------------------------
// Relation suite.

struct RelationInstance {
    std::string relation;
    int n = 0;
    int m = 0;             // simple module label; -1 = regular module
    bool pass = false;
    std::string detail;    // first difference on failure
};

struct RelationReport {
    std::string relation;
    bool pass = false;
    std::vector<RelationInstance> instances;
};

/// Names of all registered relations, in deterministic report order.
std::vector<std::string> relation_names();

/// Verify one relation for all base levels n = 0..nmax on every simple, via
/// the standard-sum evaluator; low-height relations are additionally
/// cross-checked on the regular module (honest evaluator) at n <= regular_nmax.
RelationReport verify_relation(const std::string &name, int nmax,
                               int regular_nmax = 2);

std::vector<RelationReport> verify_all(int nmax, int regular_nmax = 2);

/// The splitting Q_{-+} = Q_{+-} (+) C_0: builds the four proof maps and
/// checks the five identities on all simples up to nmax.
RelationReport weyliso_split_check(int nmax);

/// Direct bubble evaluation (isotypic selector) vs macro-expanded
/// evaluation, bubbles of label k <= kmax at all admissible regions of
/// levels up to nmax.
RelationReport bubble_consistency_check(int kmax, int nmax);

/// Equivariance of an evaluated diagram: the honest matrix commutes with
/// the TL generators at the boundary level.
bool equivariance_check(const NatTransComponent &c, const ModuleRep &V);

/// Naturality: for the regular module and a random right-multiplication
/// equivariant map f, eval(D) commutes with the functorial image of f.
bool naturality_check(const WeylDiagram &D, int n, unsigned seed);

/// Closed diagrams evaluate to combinations of isotypic projectors at level
/// n: the (label k, coefficient) list; throws if the result is not central.
std::vector<std::pair<int, RatFun>> closed_scalar(const FormalDiagram &D, int n);

/// Agreement of the standard-sum and honest evaluators on a diagram, on
/// every simple at level n, compared through basis-independent invariants
/// (rank, and for endomorphism words the traces of the first two powers).
bool evaluator_bridge_check(const FormalDiagram &D, int n);

} // namespace tlweyl
