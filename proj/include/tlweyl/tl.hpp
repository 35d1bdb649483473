#pragma once

// The Temperley-Lieb algebra TL_n: exact linear combinations of planar
// (m,n) non-crossing matchings over Q(v), with diagram composition (loops
// resolve to [2]), inclusion, partial trace, and braid elements.
//
// Boundary numbering convention: strand positions are numbered right to left
// (position 1 is rightmost).  A diagram with n bottom and m top points stores
// a perfect matching on indices 0..n+m-1, where index i < n is bottom
// position i+1 and index n+j is top position j+1.

#include "tlweyl/ratfun.hpp"

#include <map>
#include <vector>

namespace tlweyl {

class TLDiagram {
  public:
    TLDiagram() : n_(0), m_(0) {}
    /// Identity diagram on n strands.
    static TLDiagram identity(int n);
    /// From an explicit partner array (validated).
    TLDiagram(int n, int m, std::vector<int> partner);

    int n() const { return n_; }
    int m() const { return m_; }
    const std::vector<int> &partner() const { return partner_; }

    /// True iff the matching is perfect and planar (interval nesting).
    bool is_planar() const;

    bool operator==(const TLDiagram &o) const {
        return n_ == o.n_ && m_ == o.m_ && partner_ == o.partner_;
    }
    bool operator<(const TLDiagram &o) const;

    std::string str() const;

  private:
    int n_, m_; // bottom, top point counts
    std::vector<int> partner_;
};

/// All non-crossing perfect matchings from n bottom to m top points.
std::vector<TLDiagram> enumerate_diagrams(int n, int m);

class TLElement {
  public:
    using Terms = std::map<TLDiagram, RatFun>;

    TLElement() : n_(0), m_(0) {}
    TLElement(int n, int m) : n_(n), m_(m) {}
    explicit TLElement(const TLDiagram &d, const RatFun &c = RatFun::one());

    static TLElement zero(int n, int m) { return TLElement(n, m); }
    static TLElement identity(int n);

    int n() const { return n_; }
    int m() const { return m_; }
    const Terms &terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const TLDiagram &d, const RatFun &c);
    RatFun coeff(const TLDiagram &d) const;

    TLElement operator+(const TLElement &o) const;
    TLElement operator-(const TLElement &o) const;
    TLElement operator-() const;
    TLElement scaled(const RatFun &c) const;
    TLElement &operator+=(const TLElement &o);

    bool operator==(const TLElement &o) const {
        return n_ == o.n_ && m_ == o.m_ && terms_ == o.terms_;
    }
    bool operator!=(const TLElement &o) const { return !(*this == o); }

    std::string str() const;

  private:
    int n_, m_;
    Terms terms_;
};

/// Stack `upper` (k -> m) on top of `lower` (n -> k); closed loops contribute
/// factors of [2].
TLDiagram tl_compose_diagrams(const TLDiagram &upper, const TLDiagram &lower,
                              int &loops);
TLElement tl_compose(const TLElement &upper, const TLElement &lower);

/// Product in TL_n for square elements: x * y = x stacked on top of y.
inline TLElement tl_mul(const TLElement &x, const TLElement &y) {
    return tl_compose(x, y);
}

/// Cup-cap generator over strands i, i+1 (1 <= i <= n-1).  Normalized form
/// divides by [2] so e_i^2 = e_i; unnormalized e'_i satisfies e'^2 = [2] e'.
TLElement generator_e(int i, int n, bool normalized);

/// Natural inclusion TL_n -> TL_{n+1} (identity strand added on the left);
/// also valid for rectangular elements.
TLDiagram include_diagram(const TLDiagram &d);
TLElement include(const TLElement &x);

/// Partial trace TL_n -> TL_{n-1}: closes the leftmost strand.
TLElement ptr(const TLElement &x);

/// Horizontal-axis reflection (swaps bottom and top).
TLDiagram reflect_diagram(const TLDiagram &d);
TLElement reflect(const TLElement &x);

/// Braid generator sigma_i = v - v^{-1} e'_i (or its inverse).
TLElement braid_sigma(int i, int n, bool inverse);

/// The four Hecke surjections of the quadratic/braid-relation lemma.
enum class HeckeMap { psi, psi_bar, phi, phi_bar };
struct HeckeReport {
    bool quadratic_ok = false;
    bool braid_ok = false;
    bool ok() const { return quadratic_ok && braid_ok; }
};
HeckeReport hecke_surjection_check(HeckeMap which, int n);

} // namespace tlweyl
