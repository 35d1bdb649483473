#pragma once

// Exact arithmetic in Z[v, v^-1] and its fraction field Q(v), with q = v^2.
// Houses quantum integers [n] and the modular-evaluation equality screen.

#include <cstdint>
#include <gmpxx.h>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tlweyl {

/// Sparse Laurent polynomial in v with rational coefficients.
/// Invariant: no zero coefficients are stored.
class LaurentPoly {
  public:
    using Terms = std::map<int, mpq_class>;

    LaurentPoly() = default;
    explicit LaurentPoly(const mpq_class &c);
    /// Monomial c * v^k.
    LaurentPoly(const mpq_class &c, int k);

    static LaurentPoly zero() { return LaurentPoly(); }
    static LaurentPoly one() { return LaurentPoly(mpq_class(1)); }
    /// v^k
    static LaurentPoly monomial(int k) { return LaurentPoly(mpq_class(1), k); }

    bool is_zero() const { return terms_.empty(); }
    bool is_one() const;
    const Terms &terms() const { return terms_; }

    /// Lowest/highest exponent with nonzero coefficient. Pre: not zero.
    int min_exp() const;
    int max_exp() const;
    mpq_class coeff(int k) const;

    LaurentPoly operator+(const LaurentPoly &o) const;
    LaurentPoly operator-(const LaurentPoly &o) const;
    LaurentPoly operator-() const;
    LaurentPoly operator*(const LaurentPoly &o) const;
    LaurentPoly &operator+=(const LaurentPoly &o);
    LaurentPoly &operator-=(const LaurentPoly &o);

    /// Multiply by the monomial c * v^k.
    LaurentPoly shifted(int k) const;
    LaurentPoly scaled(const mpq_class &c) const;

    bool operator==(const LaurentPoly &o) const { return terms_ == o.terms_; }
    bool operator!=(const LaurentPoly &o) const { return !(*this == o); }
    bool operator<(const LaurentPoly &o) const;

    /// Evaluate at v = v0 in Z/p. Returns nullopt ("pole") when a coefficient
    /// denominator vanishes mod p or v0 == 0.
    std::optional<std::uint64_t> eval_mod_p(std::uint64_t v0, std::uint64_t p) const;

    /// Canonical string, terms in descending exponent: "v^2 + v^-2", "1", "0".
    std::string str() const;

    void set_coeff(int k, const mpq_class &c);

  private:
    Terms terms_;
};

/// Quantum integer [n] = sum_{j=0}^{n-1} v^{2(n-1-2j)}; [0] = 0; [-n] = -[n].
LaurentPoly quantum_int(int n);

/// Element of Q(v) stored in reduced canonical form: gcd(num, den) = 1, the
/// denominator has lowest exponent 0 and leading coefficient 1 (monic).
class RatFun {
  public:
    RatFun() : num_(), den_(LaurentPoly::one()) {}
    RatFun(const LaurentPoly &n);
    RatFun(const LaurentPoly &n, const LaurentPoly &d);
    RatFun(const mpq_class &c);
    RatFun(long c) : RatFun(mpq_class(c)) {}

    static RatFun zero() { return RatFun(); }
    static RatFun one() { return RatFun(LaurentPoly::one()); }

    const LaurentPoly &num() const { return num_; }
    const LaurentPoly &den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_.is_one() && den_.is_one(); }

    RatFun operator+(const RatFun &o) const;
    RatFun operator-(const RatFun &o) const;
    RatFun operator-() const;
    RatFun operator*(const RatFun &o) const;
    RatFun operator/(const RatFun &o) const;
    RatFun inv() const;
    RatFun &operator+=(const RatFun &o);
    RatFun &operator-=(const RatFun &o);
    RatFun &operator*=(const RatFun &o);

    bool operator==(const RatFun &o) const {
        return num_ == o.num_ && den_ == o.den_;
    }
    bool operator!=(const RatFun &o) const { return !(*this == o); }
    bool operator<(const RatFun &o) const;

    /// Cross-multiplication equality: a/b == c/d iff ad - bc = 0.
    bool eq_cross(const RatFun &o) const;

    std::optional<std::uint64_t> eval_mod_p(std::uint64_t v0, std::uint64_t p) const;

    /// Canonical string "(num)/(den)", e.g. "(v^2 + v^-2)/(1)".
    std::string str() const;

  private:
    // Constructs from a fraction already known to be in lowest terms; only
    // normalizes the denominator (monic, lowest exponent 0), no gcd.
    struct reduced_tag {};
    RatFun(LaurentPoly n, LaurentPoly d, reduced_tag);

    void reduce();
    LaurentPoly num_, den_;
};

/// [n] as a RatFun, for convenience in scalar formulas.
RatFun qint(int n);

namespace detail {
/// d-th factor in the factorization of quantum integers: F_2 = [2] shifted to
/// lowest exponent 0 and F_d = [d] / prod of F_e over proper divisors e > 1.
/// Monic with constant term 1; [d] shifted = prod of F_e over divisors e > 1.
const LaurentPoly &cheb_factor(int d);
/// Express a monic ordinary polynomial as a product of cheb_factor polys;
/// appends (factor index, multiplicity) pairs. False if it is no such product.
bool cheb_factorize(const LaurentPoly &d,
                    std::vector<std::pair<int, int>> &out);
} // namespace detail

std::uint64_t mod_pow(std::uint64_t b, std::uint64_t e, std::uint64_t p);
std::uint64_t mod_inv(std::uint64_t a, std::uint64_t p);

} // namespace tlweyl
