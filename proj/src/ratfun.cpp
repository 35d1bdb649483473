#include "tlweyl/ratfun.hpp"

#include <algorithm>
#include <cstdint>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace tlweyl {

LaurentPoly::LaurentPoly(const mpq_class &c) {
    if (c != 0)
        terms_[0] = c;
}

LaurentPoly::LaurentPoly(const mpq_class &c, int k) {
    if (c != 0)
        terms_[k] = c;
}

bool LaurentPoly::is_one() const {
    return terms_.size() == 1 && terms_.begin()->first == 0 &&
           terms_.begin()->second == 1;
}

int LaurentPoly::min_exp() const {
    if (is_zero())
        throw std::logic_error("min_exp of zero polynomial");
    return terms_.begin()->first;
}

int LaurentPoly::max_exp() const {
    if (is_zero())
        throw std::logic_error("max_exp of zero polynomial");
    return terms_.rbegin()->first;
}

mpq_class LaurentPoly::coeff(int k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? mpq_class(0) : it->second;
}

void LaurentPoly::set_coeff(int k, const mpq_class &c) {
    if (c == 0)
        terms_.erase(k);
    else
        terms_[k] = c;
}

LaurentPoly &LaurentPoly::operator+=(const LaurentPoly &o) {
    for (const auto &[k, c] : o.terms_) {
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            terms_.emplace(k, c);
        } else {
            it->second += c;
            if (it->second == 0)
                terms_.erase(it);
        }
    }
    return *this;
}

LaurentPoly &LaurentPoly::operator-=(const LaurentPoly &o) {
    for (const auto &[k, c] : o.terms_) {
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            terms_.emplace(k, -c);
        } else {
            it->second -= c;
            if (it->second == 0)
                terms_.erase(it);
        }
    }
    return *this;
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly &o) const {
    LaurentPoly r = *this;
    r += o;
    return r;
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly &o) const {
    LaurentPoly r = *this;
    r -= o;
    return r;
}

LaurentPoly LaurentPoly::operator-() const {
    LaurentPoly r;
    for (const auto &[k, c] : terms_)
        r.terms_.emplace(k, -c);
    return r;
}

LaurentPoly LaurentPoly::operator*(const LaurentPoly &o) const {
    LaurentPoly r;
    for (const auto &[k1, c1] : terms_)
        for (const auto &[k2, c2] : o.terms_) {
            auto it = r.terms_.find(k1 + k2);
            if (it == r.terms_.end())
                r.terms_.emplace(k1 + k2, c1 * c2);
            else {
                it->second += c1 * c2;
                if (it->second == 0)
                    r.terms_.erase(it);
            }
        }
    return r;
}

LaurentPoly LaurentPoly::shifted(int k) const {
    LaurentPoly r;
    for (const auto &[e, c] : terms_)
        r.terms_.emplace(e + k, c);
    return r;
}

LaurentPoly LaurentPoly::scaled(const mpq_class &c) const {
    LaurentPoly r;
    if (c == 0)
        return r;
    for (const auto &[e, co] : terms_)
        r.terms_.emplace(e, co * c);
    return r;
}

bool LaurentPoly::operator<(const LaurentPoly &o) const {
    auto a = terms_.begin(), b = o.terms_.begin();
    for (; a != terms_.end() && b != o.terms_.end(); ++a, ++b) {
        if (a->first != b->first)
            return a->first < b->first;
        int c = cmp(a->second, b->second);
        if (c != 0)
            return c < 0;
    }
    return b != o.terms_.end();
}

std::uint64_t mod_pow(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1 % p;
    b %= p;
    while (e) {
        if (e & 1)
            r = (__uint128_t)r * b % p;
        b = (__uint128_t)b * b % p;
        e >>= 1;
    }
    return r;
}

std::uint64_t mod_inv(std::uint64_t a, std::uint64_t p) {
    return mod_pow(a % p, p - 2, p); // p prime
}

std::optional<std::uint64_t> LaurentPoly::eval_mod_p(std::uint64_t v0,
                                                     std::uint64_t p) const {
    if (v0 % p == 0)
        return std::nullopt; // v is invertible; v0 = 0 is out of domain
    std::uint64_t acc = 0;
    std::uint64_t vinv = mod_inv(v0, p);
    for (const auto &[k, c] : terms_) {
        mpz_class nmod = c.get_num() % mpz_class((unsigned long)p);
        mpz_class dmod = c.get_den() % mpz_class((unsigned long)p);
        if (dmod == 0)
            return std::nullopt; // coefficient denominator vanishes mod p
        std::uint64_t nv = mpz_class(nmod < 0 ? nmod + (long)p : nmod).get_ui();
        std::uint64_t dv = dmod.get_ui();
        std::uint64_t cv = (__uint128_t)nv * mod_inv(dv, p) % p;
        std::uint64_t vpow =
            k >= 0 ? mod_pow(v0, (std::uint64_t)k, p) : mod_pow(vinv, (std::uint64_t)(-k), p);
        acc = (acc + (__uint128_t)cv * vpow) % p;
    }
    return acc;
}

static std::string q_str(const mpq_class &c) {
    std::ostringstream os;
    os << c;
    return os.str();
}

std::string LaurentPoly::str() const {
    if (is_zero())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        mpq_class c = it->second;
        if (!first)
            os << (c < 0 ? " - " : " + ");
        else if (c < 0)
            os << "-";
        first = false;
        mpq_class a = abs(c);
        int k = it->first;
        if (k == 0)
            os << q_str(a);
        else {
            if (a != 1)
                os << q_str(a) << "*";
            os << "v^" << k;
        }
    }
    return os.str();
}

LaurentPoly quantum_int(int n) {
    if (n == 0)
        return LaurentPoly::zero();
    if (n < 0)
        return -quantum_int(-n);
    LaurentPoly r;
    for (int j = 0; j < n; ++j)
        r.set_coeff(2 * (n - 1 - 2 * j), r.coeff(2 * (n - 1 - 2 * j)) + 1);
    return r;
}

RatFun qint(int n) { return RatFun(quantum_int(n)); }

// ---- ordinary-polynomial helpers for reduction (min exponent >= 0) ----

// Remainder of a by b (both ordinary polynomials, b nonzero).
static LaurentPoly poly_rem(LaurentPoly a, const LaurentPoly &b) {
    int db = b.max_exp();
    mpq_class lb = b.coeff(db);
    while (!a.is_zero() && a.max_exp() >= db) {
        int da = a.max_exp();
        mpq_class f = a.coeff(da) / lb;
        a -= b.shifted(da - db).scaled(f);
    }
    return a;
}

// Exact quotient a / b (pre: b divides a).
static LaurentPoly poly_quot(LaurentPoly a, const LaurentPoly &b) {
    LaurentPoly q;
    int db = b.max_exp();
    mpq_class lb = b.coeff(db);
    while (!a.is_zero() && a.max_exp() >= db) {
        int da = a.max_exp();
        mpq_class f = a.coeff(da) / lb;
        q.set_coeff(da - db, f);
        a -= b.shifted(da - db).scaled(f);
    }
    if (!a.is_zero())
        throw std::logic_error("poly_quot: inexact division");
    return q;
}

// Dense integer polynomial (coefficients of v^0..v^deg) helpers for the
// subresultant PRS gcd, which avoids the coefficient blowup of rational
// Euclid.

static std::vector<mpz_class> to_int_poly(const LaurentPoly &p) {
    // p must be an ordinary polynomial (min exponent >= 0).
    mpz_class lcm = 1;
    for (const auto &[k, c] : p.terms())
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den().get_mpz_t());
    std::vector<mpz_class> v(p.max_exp() + 1, 0);
    for (const auto &[k, c] : p.terms())
        v[k] = c.get_num() * (lcm / c.get_den());
    return v;
}

static int ideg(const std::vector<mpz_class> &a) {
    int d = (int)a.size() - 1;
    while (d >= 0 && a[d] == 0)
        --d;
    return d;
}

static void make_primitive(std::vector<mpz_class> &a) {
    mpz_class g = 0;
    for (const auto &c : a)
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 0 || g == 1)
        return;
    for (auto &c : a)
        c /= g;
}

// Pseudo-remainder: rem(lc(b)^(da-db+1) * a, b), exact over Z.
static std::vector<mpz_class> prem(std::vector<mpz_class> a,
                                   const std::vector<mpz_class> &b) {
    int da = ideg(a), db = ideg(b);
    const mpz_class &lb = b[db];
    int needed = da - db + 1; // exact power of lc(b) required
    while (da >= db) {
        mpz_class lead = a[da];
        for (int i = 0; i <= da; ++i)
            a[i] *= lb;
        --needed;
        for (int i = 0; i <= db; ++i)
            a[da - db + i] -= lead * b[i];
        da = ideg(a);
        if (da < 0)
            break;
    }
    a.resize(da + 1);
    // If the degree dropped by more than one in some step we multiplied
    // fewer times than the definition requires; top up so the subresultant
    // divisions stay exact.
    for (; needed > 0; --needed)
        for (auto &c : a)
            c *= lb;
    return a;
}

static LaurentPoly from_int_poly(const std::vector<mpz_class> &a) {
    LaurentPoly p;
    for (int i = 0; i <= ideg(a); ++i)
        if (a[i] != 0)
            p.set_coeff(i, mpq_class(a[i]));
    return p;
}

// Monic gcd over Q[v] of two ordinary polynomials.
static LaurentPoly poly_gcd(const LaurentPoly &pa, const LaurentPoly &pb) {
    if (pa.is_zero() || pb.is_zero()) {
        const LaurentPoly &nz = pa.is_zero() ? pb : pa;
        if (nz.is_zero())
            return nz;
        return nz.scaled(1 / nz.coeff(nz.max_exp()));
    }
    std::vector<mpz_class> a = to_int_poly(pa), b = to_int_poly(pb);
    make_primitive(a);
    make_primitive(b);
    if (ideg(a) < ideg(b))
        std::swap(a, b);
    if (ideg(b) == 0)
        return LaurentPoly::one();
    mpz_class g = 1, h = 1;
    for (;;) {
        int delta = ideg(a) - ideg(b);
        std::vector<mpz_class> r = prem(a, b);
        if (ideg(r) < 0) {
            make_primitive(b);
            LaurentPoly res = from_int_poly(b);
            return res.scaled(1 / res.coeff(res.max_exp()));
        }
        if (ideg(r) == 0)
            return LaurentPoly::one();
        a = std::move(b);
        mpz_class divisor = g;
        for (int i = 0; i < delta; ++i)
            divisor *= h;
        for (auto &c : r)
            c /= divisor;
        b = std::move(r);
        g = a[ideg(a)];
        if (delta > 0) {
            mpz_class hn = g;
            for (int i = 1; i < delta; ++i)
                hn *= g;
            for (int i = 0; i < delta - 1; ++i)
                hn /= h;
            h = hn;
        }
    }
}

// Monic gcd of the polynomial parts (i.e. ignoring monomial factors) of two
// nonzero Laurent polynomials. The result is an ordinary polynomial with a
// nonzero constant term.
static LaurentPoly laurent_gcd(const LaurentPoly &a, const LaurentPoly &b) {
    return poly_gcd(a.shifted(-a.min_exp()), b.shifted(-b.min_exp()));
}

// Exact division of a Laurent polynomial by an ordinary polynomial with
// nonzero constant term (as produced by laurent_gcd).
static LaurentPoly laurent_exact_div(const LaurentPoly &a, const LaurentPoly &g) {
    int s = a.min_exp();
    return poly_quot(a.shifted(-s), g).shifted(s);
}

// Cheap modular screen used by the trial-division fast path: a polynomial
// divisibility test mod a fixed word-size prime rules out non-divisors
// without any bignum division.
static constexpr std::uint64_t kScreenP = 1000000007;

static bool modp_dense(const LaurentPoly &a, std::vector<std::uint64_t> &out) {
    out.assign(a.max_exp() + 1, 0);
    for (const auto &[k, c] : a.terms()) {
        std::uint64_t dn = mpz_fdiv_ui(c.get_den().get_mpz_t(), kScreenP);
        if (dn == 0)
            return false;
        // mpz_fdiv_ui is a floor-division remainder, so it is already the
        // canonical representative in [0, p) for negative numerators too.
        std::uint64_t nm = mpz_fdiv_ui(c.get_num().get_mpz_t(), kScreenP);
        out[k] = (__uint128_t)nm * mod_inv(dn, kScreenP) % kScreenP;
    }
    return true;
}

// Does f divide a mod p? Pre: f is monic mod p.
static bool modp_divides(std::vector<std::uint64_t> a,
                         const std::vector<std::uint64_t> &f) {
    int da = (int)a.size() - 1, df = (int)f.size() - 1;
    for (int i = da; i >= df; --i) {
        std::uint64_t c = a[i];
        if (!c)
            continue;
        for (int j = 0; j <= df; ++j) {
            std::uint64_t t = (__uint128_t)c * f[j] % kScreenP;
            std::uint64_t &x = a[i - df + j];
            x = (x + kScreenP - t) % kScreenP;
        }
    }
    for (int i = 0; i < df && i < (int)a.size(); ++i)
        if (a[i])
            return false;
    return true;
}

// Irreducible-by-construction factors of the quantum integers:
// F_2 = [2] (shifted to lowest exponent 0) and F_d = [d] / prod F_e over
// proper divisors e > 1 of d. Every denominator arising from quantum-integer
// formulas is a monomial times a product of these, which lets reduce() work
// by cheap trial division instead of a large gcd.
const LaurentPoly &detail::cheb_factor(int d) {
    static std::vector<LaurentPoly> table; // index d; entries 0,1 unused
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    while ((int)table.size() <= d) {
        int k = (int)table.size();
        if (k < 2) {
            table.push_back(LaurentPoly::one());
            continue;
        }
        LaurentPoly f = quantum_int(k);
        f = f.shifted(-f.min_exp());
        for (int e = 2; e < k; ++e)
            if (k % e == 0)
                f = poly_quot(f, table[e]);
        table.push_back(f);
    }
    return table[d];
}

// Try to write the monic ordinary polynomial d as a product of cheb_factor
// polynomials; on success fill (factor index, multiplicity) pairs.
bool detail::cheb_factorize(const LaurentPoly &d,
                           std::vector<std::pair<int, int>> &out) {
    LaurentPoly rem = d;
    std::vector<std::uint64_t> rimg, fimg;
    bool screen = modp_dense(rem, rimg);
    int cap = std::min(2 * d.max_exp() + 4, 128);
    for (int k = 2; k <= cap && !rem.is_one(); ++k) {
        const LaurentPoly &f = detail::cheb_factor(k);
        if (f.max_exp() > rem.max_exp())
            continue;
        bool have_fimg = false;
        int mult = 0;
        for (;;) {
            if (screen) {
                if (!have_fimg) {
                    modp_dense(f, fimg);
                    have_fimg = true;
                }
                if (!modp_divides(rimg, fimg))
                    break;
            }
            LaurentPoly r = poly_rem(rem, f);
            if (!r.is_zero())
                break;
            rem = poly_quot(rem, f);
            ++mult;
            if (screen)
                screen = modp_dense(rem, rimg);
        }
        if (mult)
            out.emplace_back(k, mult);
    }
    return rem.is_one();
}

RatFun::RatFun(const LaurentPoly &n) : num_(n), den_(LaurentPoly::one()) {}

RatFun::RatFun(LaurentPoly n, LaurentPoly d, reduced_tag)
    : num_(std::move(n)), den_(std::move(d)) {
    if (num_.is_zero()) {
        den_ = LaurentPoly::one();
        return;
    }
    int e = den_.min_exp();
    if (e != 0) {
        den_ = den_.shifted(-e);
        num_ = num_.shifted(-e);
    }
    mpq_class lead = den_.coeff(den_.max_exp());
    if (lead != 1) {
        mpq_class inv = 1 / lead;
        den_ = den_.scaled(inv);
        num_ = num_.scaled(inv);
    }
}

RatFun::RatFun(const mpq_class &c) : num_(LaurentPoly(c)), den_(LaurentPoly::one()) {}

RatFun::RatFun(const LaurentPoly &n, const LaurentPoly &d) : num_(n), den_(d) {
    if (d.is_zero())
        throw std::domain_error("RatFun: zero denominator");
    reduce();
}

void RatFun::reduce() {
    if (num_.is_zero()) {
        den_ = LaurentPoly::one();
        return;
    }
    if (den_.terms().size() == 1) {
        // Monomial denominator: absorb into the numerator, no gcd needed.
        auto it = den_.terms().begin();
        num_ = num_.shifted(-it->first).scaled(1 / it->second);
        den_ = LaurentPoly::one();
        return;
    }
    // Shift both to ordinary polynomials; track net v-power on the numerator.
    int sn = num_.min_exp(), sd = den_.min_exp();
    LaurentPoly n = num_.shifted(-sn), d = den_.shifted(-sd);
    {
        mpq_class lead = d.coeff(d.max_exp());
        if (lead != 1) {
            mpq_class inv = 1 / lead;
            d = d.scaled(inv);
            n = n.scaled(inv);
        }
    }
    // Fast path: denominators in this project are products of quantum-integer
    // factors; cancel by trial division instead of a large gcd.
    std::vector<std::pair<int, int>> facs;
    if (detail::cheb_factorize(d, facs)) {
        std::vector<std::uint64_t> nimg, fimg;
        bool screen = modp_dense(n, nimg);
        LaurentPoly newden = LaurentPoly::one();
        for (auto &[k, mult] : facs) {
            const LaurentPoly &f = detail::cheb_factor(k);
            bool have_fimg = false;
            while (mult > 0) {
                if (screen) {
                    if (!have_fimg) {
                        modp_dense(f, fimg);
                        have_fimg = true;
                    }
                    if (!modp_divides(nimg, fimg))
                        break;
                }
                LaurentPoly r = poly_rem(n, f);
                if (!r.is_zero())
                    break;
                n = poly_quot(n, f);
                --mult;
                if (screen)
                    screen = modp_dense(n, nimg);
            }
            for (int i = 0; i < mult; ++i)
                newden = newden * f;
        }
        num_ = n.shifted(sn - sd);
        den_ = newden;
        return;
    }
    LaurentPoly g = poly_gcd(n, d);
    if (!g.is_one()) {
        n = poly_quot(n, g);
        d = poly_quot(d, g);
    }
    // Denominator: lowest exponent 0 and monic.
    int extra = d.min_exp();
    d = d.shifted(-extra);
    mpq_class lead = d.coeff(d.max_exp());
    d = d.scaled(1 / lead);
    n = n.scaled(1 / lead);
    num_ = n.shifted(sn - sd - extra);
    den_ = d;
}

RatFun RatFun::operator+(const RatFun &o) const {
    if (is_zero())
        return o;
    if (o.is_zero())
        return *this;
    // Both operands are reduced; with g = gcd(b, d) the sum of a/b and c/d is
    // t / (b * (d/g)) with t = a*(d/g) + c*(b/g), and any remaining common
    // factor of the result divides g. This keeps the gcd work on small polys.
    if (den_ == o.den_) {
        LaurentPoly t = num_ + o.num_;
        if (t.is_zero())
            return RatFun();
        if (den_.is_one())
            return RatFun(std::move(t), LaurentPoly::one(), reduced_tag{});
        LaurentPoly h = laurent_gcd(t, den_);
        if (h.is_one())
            return RatFun(std::move(t), den_, reduced_tag{});
        return RatFun(laurent_exact_div(t, h), laurent_exact_div(den_, h),
                      reduced_tag{});
    }
    LaurentPoly g = (den_.is_one() || o.den_.is_one())
                        ? LaurentPoly::one()
                        : laurent_gcd(den_, o.den_);
    if (g.is_one())
        return RatFun(num_ * o.den_ + o.num_ * den_, den_ * o.den_,
                      reduced_tag{});
    LaurentPoly db = laurent_exact_div(den_, g);
    LaurentPoly dd = laurent_exact_div(o.den_, g);
    LaurentPoly t = num_ * dd + o.num_ * db;
    if (t.is_zero())
        return RatFun();
    LaurentPoly den = den_ * dd;
    LaurentPoly h = laurent_gcd(t, g);
    if (h.is_one())
        return RatFun(std::move(t), std::move(den), reduced_tag{});
    return RatFun(laurent_exact_div(t, h), laurent_exact_div(den, h),
                  reduced_tag{});
}

RatFun RatFun::operator-(const RatFun &o) const { return *this + (-o); }

RatFun RatFun::operator-() const {
    RatFun r = *this;
    r.num_ = -r.num_;
    return r;
}

RatFun RatFun::operator*(const RatFun &o) const {
    if (is_zero() || o.is_zero())
        return RatFun();
    // Cross-cancel: gcd(num, o.den) and gcd(o.num, den) are the only common
    // factors a product of reduced fractions can acquire.
    LaurentPoly n1 = num_, n2 = o.num_, d1 = den_, d2 = o.den_;
    if (!d2.is_one()) {
        LaurentPoly g = laurent_gcd(n1, d2);
        if (!g.is_one()) {
            n1 = laurent_exact_div(n1, g);
            d2 = laurent_exact_div(d2, g);
        }
    }
    if (!d1.is_one()) {
        LaurentPoly g = laurent_gcd(n2, d1);
        if (!g.is_one()) {
            n2 = laurent_exact_div(n2, g);
            d1 = laurent_exact_div(d1, g);
        }
    }
    return RatFun(n1 * n2, d1 * d2, reduced_tag{});
}

RatFun RatFun::operator/(const RatFun &o) const { return *this * o.inv(); }

RatFun RatFun::inv() const {
    if (is_zero())
        throw std::domain_error("RatFun: inverse of zero");
    return RatFun(den_, num_, reduced_tag{});
}

RatFun &RatFun::operator+=(const RatFun &o) { return *this = *this + o; }
RatFun &RatFun::operator-=(const RatFun &o) { return *this = *this - o; }
RatFun &RatFun::operator*=(const RatFun &o) { return *this = *this * o; }

bool RatFun::operator<(const RatFun &o) const {
    if (num_ != o.num_)
        return num_ < o.num_;
    return den_ < o.den_;
}

bool RatFun::eq_cross(const RatFun &o) const {
    return (num_ * o.den_ - o.num_ * den_).is_zero();
}

std::optional<std::uint64_t> RatFun::eval_mod_p(std::uint64_t v0,
                                                std::uint64_t p) const {
    auto nv = num_.eval_mod_p(v0, p);
    auto dv = den_.eval_mod_p(v0, p);
    if (!nv || !dv || *dv == 0)
        return std::nullopt;
    return (__uint128_t)*nv * mod_inv(*dv, p) % p;
}

std::string RatFun::str() const {
    return "(" + num_.str() + ")/(" + den_.str() + ")";
}

} // namespace tlweyl
