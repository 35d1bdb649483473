#pragma once

// String-diagram data language for the annular cup/cap calculus: sign words,
// sliced diagrams of elementary tiles, region labeling by levels, the
// admissibility gates, and macro expansion into solid tiles.
//
// Conventions.  A sign word is read left to right; the rightmost character
// is the innermost functor (applied first).  A region is indexed by its
// depth = number of strands strictly to its right; the rightmost region of
// a diagram at base level n is labeled n, and the label increases by 1
// across an up strand and decreases by 1 across a down strand (right to
// left).  Tile positions are depths: for strand tiles the depth of the
// rightmost boundary character they touch, for cups the number of
// characters to the right of the insertion point, for boxes/bubbles the
// depth of the region they sit in.
//
// Cup/cap orientation convention (pinned by the zigzag checks, see the
// relation suite): cup_right creates "-+", cap_right consumes "-+",
// cup_left creates "+-", cap_left consumes "+-".

#include "tlweyl/ratfun.hpp"

#include <string>
#include <vector>

namespace tlweyl {

/// Sign word over {+,-}; the empty word is the monoidal unit.
using SignWord = std::string;

/// (#+) - (#-).
int word_norm(const SignWord &w);

enum class TileKind {
    id_up,
    id_down,
    cup_right,   // creates "-+"
    cap_right,   // consumes "-+"
    cup_left,    // creates "+-"
    cap_left,    // consumes "+-"
    cupcap_up,   // (+,+) -> (+,+), disoriented cupcap (normalized idempotent)
    cupcap_down, // (-,-) -> (-,-)
    box,         // scalar [n'+k+1]/[n'+k+2] in its region
    bubble,      // isotypic projector in its region
    box_dagger,  // macro: (oriented circle) - box(k-1) = scalar [2]-[n'+k]/[n'+k+1]
};

struct Tile {
    TileKind kind = TileKind::id_up;
    int pos = 0; // depth, see header comment
    int k = 0;   // label for box / bubble / box_dagger

    bool operator==(const Tile &o) const {
        return kind == o.kind && pos == o.pos && k == o.k;
    }
};

/// Number of sign-word characters the tile consumes / produces.
int tile_arity_in(TileKind k);
int tile_arity_out(TileKind k);
/// The boundary words of a tile ("" for region tiles).
SignWord tile_word_in(TileKind k);
SignWord tile_word_out(TileKind k);

struct WeylDiagram {
    SignWord source;
    SignWord target;
    std::vector<std::vector<Tile>> slices; // bottom to top

    bool operator==(const WeylDiagram &o) const {
        return source == o.source && target == o.target && slices == o.slices;
    }
};

/// Identity diagram on a word (no slices).
WeylDiagram identity_diagram(const SignWord &w);

/// Build a diagram from a source word and slices, computing the target;
/// throws std::invalid_argument on malformed slices.
WeylDiagram make_diagram(const SignWord &source,
                         const std::vector<std::vector<Tile>> &slices);

/// Apply one slice of tiles to a word (validation helper); throws on
/// orientation mismatch or overlapping tiles.
SignWord apply_slice(const SignWord &w, const std::vector<Tile> &slice);

/// Human-readable validation: empty list when the diagram is well formed.
std::vector<std::string> validate(const WeylDiagram &d);

struct RegionLabeling {
    int base = 0;
    /// Per slice-boundary word, the labels of its regions from the right:
    /// boundary_labels[s][d] = label of the region at depth d in the word
    /// below slice s (index slices.size() = top word).
    std::vector<std::vector<int>> boundary_labels;
};

RegionLabeling region_labels(const WeylDiagram &d, int n);

enum class GateStatus { admissible, zero, invalid };

struct GateReport {
    GateStatus status = GateStatus::admissible;
    std::string reason; // empty when admissible
};

/// W'_0 / W'_heart admissibility at base level n: "zero" when a boundary
/// word dips below level 0 (the nabla gate) or a bubble's region label n'
/// has n' - 2k < 0 or k < 0; "invalid" when a box(k) sits in a region
/// labeled n' with n' + k + 2 <= 0.
GateReport gate_check(const WeylDiagram &d, int n);

/// Formal RatFun-combination of diagrams with common boundary words.
struct FormalDiagram {
    SignWord source;
    SignWord target;
    std::vector<std::pair<RatFun, WeylDiagram>> terms;
};

FormalDiagram formal(const WeylDiagram &d, const RatFun &c = RatFun::one());
FormalDiagram formal_sum(const std::vector<std::pair<RatFun, WeylDiagram>> &terms);

/// Expand macro tiles (box_dagger, standalone bubbles) into combinations of
/// solid tiles.  box_dagger(k) -> (oriented circle) - box(k-1); bubble(k<0)
/// -> the empty (zero) combination; bubble(0) -> the strand-closure
/// combination of its defining equation; bubble(k+1) -> the doubled-circle
/// nesting around bubble(k), recursively.  Idempotent on expanded output.
FormalDiagram macro_expand(const WeylDiagram &d);
FormalDiagram macro_expand(const FormalDiagram &d);

/// JSON round-trip for the CLI ({"source": "-+", "slices":[[{"kind":...,
/// "pos":..., "k":...}]]}).
std::string diagram_to_json(const WeylDiagram &d);
WeylDiagram diagram_from_json(const std::string &json_text);

const char *tile_kind_name(TileKind k);
bool tile_kind_from_name(const std::string &s, TileKind &out);

} // namespace tlweyl
