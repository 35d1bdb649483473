#pragma once

// Box coefficient algebras: the brace sequence {m}, the commutative box
// algebra with the adjacent-index relation b_k b_{k-1} = [2] b_k - 1, the
// orthogonal-idempotent algebra on c_k, the decorated strand algebra with its
// normal form and local-confluence checks, and numeric independence
// harnesses through the scalar representation b_k -> [n+k+1]/[n+k+2].

#include "tlweyl/linalg.hpp"
#include "tlweyl/ratfun.hpp"
#include "tlweyl/tl.hpp"

#include <map>
#include <string>
#include <vector>

namespace tlweyl {

/// The sequence {m}: {0} = 1, {m} = 0 for m < 0, {m} = [2]{m-1} - {m-2}.
/// This is the unique sequence for which the descending-product identity
/// b_k b_{k-1} ... b_{k-m} = {m} b_k - {m-1} is compatible with the defining
/// relation b_k b_{k-1} = [2] b_k - 1 (and with the scalar representation);
/// it equals the quantum integer [m+1] in q = v^2.  Memoized.
const LaurentPoly &brace(int m);

/// Coefficient beta_{m,j} of q^{m-2j} in {m} (0 outside 0 <= j <= m).
mpq_class brace_coeff(int m, int j);

/// Element of the commutative box algebra over Q(v).  Basis monomials are
/// maps index -> exponent (exponents may be negative for the formally
/// inverted low-index generators); the reduced basis keeps at most one
/// index >= -2 per monomial, all other factors being opaque low-index
/// symbols with no further relations.
class BoxElement {
  public:
    using Mono = std::map<int, int>; // index -> nonzero exponent
    using Terms = std::map<Mono, RatFun>;

    BoxElement() = default;

    static BoxElement zero() { return BoxElement(); }
    static BoxElement one();
    /// b_k^p (p may be negative; p = 0 gives 1).
    static BoxElement generator(int k, int p = 1);
    static BoxElement constant(const RatFun &c);

    const Terms &terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    BoxElement operator+(const BoxElement &o) const;
    BoxElement operator-(const BoxElement &o) const;
    BoxElement operator*(const BoxElement &o) const;
    BoxElement scaled(const RatFun &c) const;
    BoxElement &operator+=(const BoxElement &o);

    bool operator==(const BoxElement &o) const { return terms_ == o.terms_; }
    bool operator!=(const BoxElement &o) const { return !(*this == o); }

    std::string str() const;

    /// Adds c * m and re-reduces the affected monomial.
    void add_term(const Mono &m, const RatFun &c);

  private:
    Terms terms_;
};

/// Fully reduced product (descending-product and adjacent-index relations).
BoxElement box_mul(const BoxElement &a, const BoxElement &b);

/// The descending product b_k b_{k-1} ... b_{k-m} reduced via box_mul,
/// compared against {m} b_k - {m-1}.  Requires k - r >= m >= 0 with the
/// implicit lower bound r fixed by the caller's index range.
bool box_desc_check(int k, int m);

/// Scalar representation at level n: b_k -> [n+k+1]/[n+k+2].  Throws
/// std::domain_error when some factor has n + k + 2 <= 0, or when the
/// element contains an opaque symbol the representation cannot see
/// (index <= -(n+2) after reduction).
RatFun box_eval(const BoxElement &x, int n);

/// Exact identity ([j]/[j+1])^p = q^p (1 - q^{2j})^p / (1 - q^{2(j+1)})^p
/// in Q(v) with q = v^2.  Requires j > -1, p >= 0.
bool power_series_identity_check(int j, int p);

/// Element of the orthogonal-idempotent algebra: constant + sum over c_k,
/// with c_k c_l = delta_{kl} c_k.
class CElement {
  public:
    CElement() = default;

    static CElement one();
    static CElement generator(int k);
    static CElement constant(const RatFun &c);

    const RatFun &scalar() const { return scalar_; }
    const std::map<int, RatFun> &terms() const { return terms_; }
    bool is_zero() const;

    CElement operator+(const CElement &o) const;
    CElement operator*(const CElement &o) const;
    CElement scaled(const RatFun &c) const;

    bool operator==(const CElement &o) const {
        return scalar_ == o.scalar_ && terms_ == o.terms_;
    }
    bool operator!=(const CElement &o) const { return !(*this == o); }

    /// Evaluation on the isotypic block k at level n: scalar + coeff(c_k),
    /// with c_j = 0 for j > floor(n/2).
    RatFun eval(int n, int block) const;

  private:
    RatFun scalar_ = RatFun::zero();
    std::map<int, RatFun> terms_;
};

/// One factor of a product element for the independence harness.
struct PsiElement {
    BoxElement box = BoxElement::one();
    CElement c = CElement::one();
};

/// Rank of the evaluation matrix of the given family over all (level n,
/// isotypic block) pairs with n in `levels` and block <= floor(n/2).
/// Full rank certifies linear independence of the family.
int independence_rank(const std::vector<PsiElement> &family,
                      const std::vector<int> &levels);

// ---------------------------------------------------------------------------
// The decorated strand algebra on s strands: generators e_i (1 <= i <= s-1,
// e_i^2 = [2] e_i), bubbles c_{k,i} and boxes b_{k,i} at positions
// 0 <= i <= s.  Normal form: bubble monomial x box monomial x strand
// diagram, boxes in standard position-0 form, bubbles slid toward
// position 0 through top cups of the diagram.

struct TLPlusToken {
    enum Kind { E, Eprime, C, B, Binv } kind;
    int i = 0; // strand/position index
    int k = 0; // decoration label (unused for E/Eprime)
};

class TLPlusElement {
  public:
    // bubble positions -> labels; box monomial; strand diagram
    struct Key {
        std::map<int, int> bubbles;
        BoxElement::Mono boxes;
        TLDiagram dia;
        bool operator<(const Key &o) const;
        bool operator==(const Key &o) const {
            return bubbles == o.bubbles && boxes == o.boxes && dia == o.dia;
        }
    };
    using Terms = std::map<Key, RatFun>;

    explicit TLPlusElement(int s) : s_(s) {}

    int strands() const { return s_; }
    const Terms &terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    static TLPlusElement identity(int s);

    TLPlusElement operator+(const TLPlusElement &o) const;
    TLPlusElement operator-(const TLPlusElement &o) const;
    TLPlusElement scaled(const RatFun &c) const;

    bool operator==(const TLPlusElement &o) const {
        return s_ == o.s_ && terms_ == o.terms_;
    }
    bool operator!=(const TLPlusElement &o) const { return !(*this == o); }

    void add_term(const Key &key, const RatFun &c);

    std::string str() const;

  private:
    int s_;
    Terms terms_;
};

/// Left-multiplies (stacks on top) a single generator and re-normalizes.
TLPlusElement tlplus_apply(const TLPlusToken &t, const TLPlusElement &x);

/// Normal form of a word in the generators, rightmost factor first applied
/// to the identity.  Words are read left-to-right as a product.
TLPlusElement tlplus_normal_form(int s, const std::vector<TLPlusToken> &word);

struct DiamondInstance {
    std::string ambiguity;
    int s = 0, i = 0, k = 0;
    bool pass = false;
};

struct DiamondReport {
    bool pass = false;
    std::vector<DiamondInstance> instances;
};

/// Local confluence of the four critical overlaps of the bubble-past-cup
/// relation: both reduction branches of each overlap word are normalized
/// and compared, for all admissible positions with s <= smax, k <= kmax.
DiamondReport diamond_check(int smax, int kmax);

/// Consistency of the normal form with the diagram evaluation: the word and
/// its normal form are translated to diagrams on s upward strands and
/// evaluated on every simple at each level in `levels`.
bool psi_s_consistency(int s, const std::vector<TLPlusToken> &word,
                       const std::vector<int> &levels);

} // namespace tlweyl
