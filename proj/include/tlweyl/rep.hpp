#pragma once

// Finite-dimensional modules over the Temperley-Lieb algebras: explicit
// matrix actions of the unnormalized generators e'_i, the simple (cell)
// modules W^n_m with path basis, the regular module, induction (as a
// concrete tensor-product quotient computed by exact row reduction),
// restriction, isotypic decomposition, and the Mackey / double-induction
// diagnostics.

#include "tlweyl/jw.hpp"
#include "tlweyl/linalg.hpp"
#include "tlweyl/tl.hpp"

#include <memory>
#include <string>
#include <vector>

namespace tlweyl {

/// Data retained by induct() so that induced maps and projections back to
/// the free tensor space are available: the free space has basis
/// d_a (x) b_j over the level-(n+1) diagrams d_a (lex order) and the basis
/// of the input module, flattened as a * dim + j.
struct InductionData {
    int src_dim = 0;                  // dim of the module that was induced
    std::vector<TLDiagram> diagrams;  // level-(n+1) (n+1,n+1) diagrams, lex
    Matrix proj;                      // quotient dim x free dim
    Matrix section;                   // free dim x quotient dim, unit columns
};

class ModuleRep {
  public:
    ModuleRep() = default;
    ModuleRep(int level, std::vector<std::string> labels,
              std::vector<Matrix> eprime);

    /// The zero module at a level (level -1 is allowed: restriction of a
    /// level-0 module).
    static ModuleRep zero(int level);

    int level() const { return level_; }
    int dim() const { return static_cast<int>(labels_.size()); }
    const std::vector<std::string> &labels() const { return labels_; }

    /// Action matrix of the unnormalized generator e'_i, 1 <= i <= level-1.
    const Matrix &eprime(int i) const;

    /// Action of an arbitrary element of TL_level (columns act on basis
    /// vectors).  Diagrams are factored into generator words once per level
    /// and the per-diagram matrices are cached inside the call.
    Matrix act(const TLElement &x) const;

    /// Check e'_i^2 = [2] e'_i, e'_i e'_{i+1} e'_i = e'_i, far commutation.
    bool relations_ok() const;

    const InductionData *induction_data() const { return ind_.get(); }

    friend ModuleRep induct(const ModuleRep &V);

  private:
    int level_ = 0;
    std::vector<std::string> labels_;
    std::vector<Matrix> eprime_;
    std::shared_ptr<InductionData> ind_;
};

/// The simple module W^n_m with basis the reflected path vectors w_p,
/// p in P^n_m (lex order).  Degenerate (empty P^n_m) inputs give the zero
/// module at level n.
ModuleRep simple_module(int n, int m);

/// Left regular module TL_n acting on itself; basis = (n,n) diagrams, lex.
ModuleRep regular_module(int n);

/// Induction TL_n -> TL_{n+1}: concrete tensor-product quotient
/// TL_{n+1} (x)_{TL_n} V by exact sparse row reduction over Q(v), with a
/// deterministic basis (non-pivot free coordinates in lex order).
ModuleRep induct(const ModuleRep &V);

/// Restriction: same space, generators e'_1..e'_{level-2}.
ModuleRep restrict_module(const ModuleRep &V);

/// Image of an equivariant map under induction / restriction.  `f` maps a
/// module V to a module W at the same level (matrix dim W x dim V); both
/// induced modules must carry InductionData.
Matrix induct_map(const ModuleRep &IV, const ModuleRep &IW, const Matrix &f);

struct IsotypicComponent {
    int m = 0;            // through-degree label of the simple
    int multiplicity = 0; // rank of the projector / |P^n_m|
    Matrix projector;     // action of the central idempotent z^n_m
};

/// Isotypic decomposition via the central idempotents z^n_m; components with
/// multiplicity zero are omitted.  The projectors sum to the identity on a
/// semisimple (i.e. every) module here.
std::vector<IsotypicComponent> isotypic_decompose(const ModuleRep &V);

/// Multiplicity vector indexed by m = level, level-2, ..., down to 0/1.
std::vector<int> isotypic_multiplicities(const ModuleRep &V);

struct MackeyReport {
    bool pass = false;
    int n = 0, m = 0;
    std::vector<int> res_ind;   // multiplicities of Res Ind W^n_m
    std::vector<int> ind_res;   // multiplicities of Ind Res W^n_m
    std::vector<int> expected_diff; // one copy of W^n_m iff m == n
};

/// Res Ind W^n_m = Ind Res W^n_m (+) (W^n_n when m = n), checked through
/// honest induction / restriction and isotypic multiplicities.
MackeyReport mackey_check(int n, int m);

struct IndSquaredReport {
    bool pass = false;
    bool mult_ok = false;       // multiplicities (1,2,1) on m+2, m, m-2
    bool kill_ok = false;       // e_{n+1} kills the outer components
    bool middle_rank_ok = false;// rank |P^{n+2}_m| on the middle component
    std::vector<int> mults;     // observed multiplicities of m+2, m, m-2
};

/// Structure of Ind^2 W^n_m and the action of e_{n+1} on it.
IndSquaredReport ind_squared_check(int n, int m);

/// Loop-free generator word for an (n,n) diagram: d = e'_{w_0} ... (left to
/// right = outermost to innermost factor).  Cached per level.
const std::vector<int> &diagram_word(const TLDiagram &d);

} // namespace tlweyl
