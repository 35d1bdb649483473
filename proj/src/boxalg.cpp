#include "tlweyl/boxalg.hpp"

#include "tlweyl/rep.hpp"
#include "tlweyl/weyl.hpp"
#include "tlweyl/relations.hpp"

#include <algorithm>
#include <cassert>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace tlweyl {

// ---------------------------------------------------------------------------
// The brace sequence.

const LaurentPoly &brace(int m) {
    static std::mutex mu;
    static std::vector<LaurentPoly> cache;
    static const LaurentPoly zero = LaurentPoly::zero();
    if (m < 0)
        return zero;
    std::lock_guard<std::mutex> lock(mu);
    if (cache.empty()) {
        cache.push_back(LaurentPoly::one()); // {0}
        cache.push_back(quantum_int(2));     // {1} = [2]
    }
    while ((int)cache.size() <= m) {
        int j = (int)cache.size();
        cache.push_back(quantum_int(2) * cache[j - 1] - cache[j - 2]);
    }
    return cache[m];
}

mpq_class brace_coeff(int m, int j) {
    if (m < 0 || j < 0 || j > m)
        return mpq_class(0);
    // {m} lives in q = v^2; the q^{m-2j} coefficient sits at v^{2(m-2j)}.
    return brace(m).coeff(2 * (m - 2 * j));
}

// ---------------------------------------------------------------------------
// BoxElement.

namespace {

RatFun brace_rf(int m) { return RatFun(brace(m)); }

// Reduction of a single scaled monomial into a term map.  Rules:
//  * an inverted generator with index j >= -1 expands via
//    b_j^{-1} = [2] - b_{j-1};
//  * a pair of distinct indices k > l with positive exponents, k >= -1 and
//    l >= -2, contracts via
//    b_k b_l = ({m} b_k + {m-2} b_l - {m-1}) / {m-1},  m = k - l.
// Anything else (opaque low-index symbols and their inverses) is kept as-is.
void reduce_mono(BoxElement::Mono m, const RatFun &c,
                 BoxElement::Terms &out) {
    if (c.is_zero())
        return;
    for (auto it = m.begin(); it != m.end();) {
        if (it->second == 0)
            it = m.erase(it);
        else
            ++it;
    }
    // Expand one invertible inverse factor.
    for (const auto &[idx, p] : m) {
        if (p < 0 && idx >= -1) {
            BoxElement::Mono base = m;
            if (++base[idx] == 0)
                base.erase(idx);
            reduce_mono(base, c * qint(2), out);
            if (++base[idx - 1] == 0)
                base.erase(idx - 1);
            reduce_mono(base, -c, out);
            return;
        }
    }
    // Contract one admissible descending pair.
    for (auto it = m.rbegin(); it != m.rend(); ++it) {
        if (it->second <= 0 || it->first < -1)
            continue;
        int k = it->first;
        for (auto jt = std::next(it); jt != m.rend(); ++jt) {
            if (jt->second <= 0 || jt->first < -2)
                continue;
            int l = jt->first;
            int d = k - l;
            BoxElement::Mono base = m;
            if (--base[k] == 0)
                base.erase(k);
            if (--base[l] == 0)
                base.erase(l);
            RatFun den = brace_rf(d - 1);
            BoxElement::Mono bk = base, bl = base;
            ++bk[k];
            ++bl[l];
            reduce_mono(bk, c * brace_rf(d) / den, out);
            reduce_mono(bl, c * brace_rf(d - 2) / den, out);
            reduce_mono(base, -c, out);
            return;
        }
    }
    auto [pos, inserted] = out.emplace(std::move(m), c);
    if (!inserted) {
        pos->second += c;
        if (pos->second.is_zero())
            out.erase(pos);
    }
}

} // namespace

BoxElement BoxElement::one() {
    BoxElement x;
    x.terms_.emplace(Mono{}, RatFun::one());
    return x;
}

BoxElement BoxElement::generator(int k, int p) {
    BoxElement x;
    if (p == 0)
        return one();
    reduce_mono(Mono{{k, p}}, RatFun::one(), x.terms_);
    return x;
}

BoxElement BoxElement::constant(const RatFun &c) {
    BoxElement x;
    x.add_term(Mono{}, c);
    return x;
}

void BoxElement::add_term(const Mono &m, const RatFun &c) {
    reduce_mono(m, c, terms_);
}

BoxElement BoxElement::operator+(const BoxElement &o) const {
    BoxElement r = *this;
    r += o;
    return r;
}

BoxElement &BoxElement::operator+=(const BoxElement &o) {
    for (const auto &[m, c] : o.terms_) {
        auto [pos, inserted] = terms_.emplace(m, c);
        if (!inserted) {
            pos->second += c;
            if (pos->second.is_zero())
                terms_.erase(pos);
        }
    }
    return *this;
}

BoxElement BoxElement::operator-(const BoxElement &o) const {
    return *this + o.scaled(RatFun(-1));
}

BoxElement BoxElement::scaled(const RatFun &c) const {
    BoxElement r;
    if (c.is_zero())
        return r;
    for (const auto &[m, cc] : terms_)
        r.terms_.emplace(m, cc * c);
    return r;
}

BoxElement BoxElement::operator*(const BoxElement &o) const {
    return box_mul(*this, o);
}

std::string BoxElement::str() const {
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto &[m, c] : terms_) {
        if (!first)
            os << " + ";
        first = false;
        os << "(" << c.str() << ")";
        for (const auto &[idx, p] : m) {
            os << "*b[" << idx << "]";
            if (p != 1)
                os << "^" << p;
        }
    }
    return os.str();
}

BoxElement box_mul(const BoxElement &a, const BoxElement &b) {
    BoxElement r;
    for (const auto &[ma, ca] : a.terms())
        for (const auto &[mb, cb] : b.terms()) {
            BoxElement::Mono m = ma;
            for (const auto &[idx, p] : mb) {
                auto [pos, inserted] = m.emplace(idx, p);
                if (!inserted && (pos->second += p) == 0)
                    m.erase(pos);
            }
            r.add_term(m, ca * cb);
        }
    return r;
}

bool box_desc_check(int k, int m) {
    if (m < 0)
        return false;
    BoxElement prod = BoxElement::one();
    for (int j = k; j >= k - m; --j)
        prod = box_mul(prod, BoxElement::generator(j));
    BoxElement expected = BoxElement::generator(k).scaled(brace_rf(m)) -
                          BoxElement::constant(brace_rf(m - 1));
    return prod == expected;
}

RatFun box_eval(const BoxElement &x, int n) {
    RatFun total = RatFun::zero();
    for (const auto &[m, c] : x.terms()) {
        RatFun val = c;
        for (const auto &[idx, p] : m) {
            if (n + idx + 2 <= 0)
                throw std::domain_error("box_eval: index out of range at this level");
            if (p < 0 && n + idx + 1 == 0)
                throw std::domain_error("box_eval: vanishing factor inverted");
            RatFun s = qint(n + idx + 1) / qint(n + idx + 2);
            if (p < 0)
                s = RatFun::one() / s;
            for (int t = 0; t < std::abs(p); ++t)
                val *= s;
        }
        total += val;
    }
    return total;
}

bool power_series_identity_check(int j, int p) {
    if (j <= -1 || p < 0)
        return false;
    RatFun lhs = RatFun::one();
    RatFun rhs = RatFun::one();
    RatFun lfac = qint(j) / qint(j + 1);
    // q (1 - q^{2j}) / (1 - q^{2(j+1)}) with q = v^2.
    RatFun rfac(LaurentPoly::monomial(2) *
                    (LaurentPoly::one() - LaurentPoly::monomial(4 * j)),
                LaurentPoly::one() - LaurentPoly::monomial(4 * (j + 1)));
    for (int t = 0; t < p; ++t) {
        lhs *= lfac;
        rhs *= rfac;
    }
    return lhs == rhs;
}

// ---------------------------------------------------------------------------
// CElement.

CElement CElement::one() { return constant(RatFun::one()); }

CElement CElement::generator(int k) {
    CElement x;
    if (k >= 0)
        x.terms_.emplace(k, RatFun::one());
    return x;
}

CElement CElement::constant(const RatFun &c) {
    CElement x;
    x.scalar_ = c;
    return x;
}

bool CElement::is_zero() const { return scalar_.is_zero() && terms_.empty(); }

CElement CElement::operator+(const CElement &o) const {
    CElement r = *this;
    r.scalar_ += o.scalar_;
    for (const auto &[k, c] : o.terms_) {
        auto [pos, inserted] = r.terms_.emplace(k, c);
        if (!inserted) {
            pos->second += c;
            if (pos->second.is_zero())
                r.terms_.erase(pos);
        }
    }
    return r;
}

CElement CElement::operator*(const CElement &o) const {
    CElement r;
    r.scalar_ = scalar_ * o.scalar_;
    for (const auto &[k, c] : terms_) {
        RatFun v = c * o.scalar_;
        auto it = o.terms_.find(k);
        if (it != o.terms_.end())
            v += c * it->second;
        if (!v.is_zero())
            r.terms_.emplace(k, v);
    }
    for (const auto &[k, c] : o.terms_) {
        RatFun v = scalar_ * c;
        if (v.is_zero())
            continue;
        auto [pos, inserted] = r.terms_.emplace(k, v);
        if (!inserted) {
            pos->second += v;
            if (pos->second.is_zero())
                r.terms_.erase(pos);
        }
    }
    return r;
}

CElement CElement::scaled(const RatFun &c) const {
    CElement r;
    r.scalar_ = scalar_ * c;
    if (c.is_zero())
        return r;
    for (const auto &[k, cc] : terms_)
        r.terms_.emplace(k, cc * c);
    return r;
}

RatFun CElement::eval(int n, int block) const {
    RatFun v = scalar_;
    if (block >= 0 && 2 * block <= n) {
        auto it = terms_.find(block);
        if (it != terms_.end())
            v += it->second;
    }
    return v;
}

int independence_rank(const std::vector<PsiElement> &family,
                      const std::vector<int> &levels) {
    std::vector<std::pair<int, int>> cols;
    for (int n : levels)
        for (int b = 0; 2 * b <= n; ++b)
            cols.emplace_back(n, b);
    Matrix M((int)family.size(), (int)cols.size());
    for (int r = 0; r < (int)family.size(); ++r)
        for (int c = 0; c < (int)cols.size(); ++c)
            M.at(r, c) = box_eval(family[(std::size_t)r].box, cols[(std::size_t)c].first) *
                         family[(std::size_t)r].c.eval(cols[(std::size_t)c].first,
                                                       cols[(std::size_t)c].second);
    return M.rank();
}

// ---------------------------------------------------------------------------
// The decorated strand algebra.

bool TLPlusElement::Key::operator<(const Key &o) const {
    if (bubbles != o.bubbles)
        return bubbles < o.bubbles;
    if (boxes != o.boxes)
        return boxes < o.boxes;
    return dia < o.dia;
}

TLPlusElement TLPlusElement::identity(int s) {
    TLPlusElement x(s);
    x.terms_.emplace(Key{{}, {}, TLDiagram::identity(s)}, RatFun::one());
    return x;
}

TLPlusElement TLPlusElement::operator+(const TLPlusElement &o) const {
    assert(s_ == o.s_);
    TLPlusElement r = *this;
    for (const auto &[k, c] : o.terms_)
        r.add_term(k, c);
    return r;
}

TLPlusElement TLPlusElement::operator-(const TLPlusElement &o) const {
    return *this + o.scaled(RatFun(-1));
}

TLPlusElement TLPlusElement::scaled(const RatFun &c) const {
    TLPlusElement r(s_);
    if (c.is_zero())
        return r;
    for (const auto &[k, cc] : terms_)
        r.terms_.emplace(k, cc * c);
    return r;
}

void TLPlusElement::add_term(const Key &key, const RatFun &c) {
    if (c.is_zero())
        return;
    auto [pos, inserted] = terms_.emplace(key, c);
    if (!inserted) {
        pos->second += c;
        if (pos->second.is_zero())
            terms_.erase(pos);
    }
}

std::string TLPlusElement::str() const {
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto &[key, c] : terms_) {
        if (!first)
            os << " + ";
        first = false;
        os << "(" << c.str() << ")";
        for (const auto &[p, k] : key.bubbles)
            os << "*c[" << k << "," << p << "]";
        for (const auto &[idx, p] : key.boxes) {
            os << "*b[" << idx << "]";
            if (p != 1)
                os << "^" << p;
        }
        os << "*" << key.dia.str();
    }
    return os.str();
}

namespace {

// Slides every bubble as far toward position 0 as the diagram's adjacent
// top cups allow (label decreasing by one per cup); returns false when the
// term vanishes (a bubble label drops below zero) and merges colliding
// bubbles by orthogonality, which may also kill the term.
bool canonical_key(TLPlusElement::Key &key) {
    int s = key.dia.n();
    const std::vector<int> &partner = key.dia.partner();
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto it = key.bubbles.begin(); it != key.bubbles.end(); ++it) {
            int p = it->first, k = it->second;
            if (k < 0)
                return false;
            if (p < 2 || partner[(std::size_t)(s + p - 2)] != s + p - 1)
                continue;
            if (k - 1 < 0)
                return false;
            auto tgt = key.bubbles.find(p - 2);
            if (tgt != key.bubbles.end()) {
                if (tgt->second != k - 1)
                    return false;
                key.bubbles.erase(it);
            } else {
                key.bubbles.erase(it);
                key.bubbles.emplace(p - 2, k - 1);
            }
            changed = true;
            break;
        }
    }
    return true;
}

void add_canonical(TLPlusElement &out, TLPlusElement::Key key, const RatFun &c) {
    if (c.is_zero())
        return;
    if (!canonical_key(key))
        return;
    out.add_term(key, c);
}

TLPlusElement apply_c(int k, int i, const TLPlusElement &x) {
    TLPlusElement out(x.strands());
    if (k < 0)
        return out;
    for (const auto &[key, c] : x.terms()) {
        auto it = key.bubbles.find(i);
        if (it != key.bubbles.end()) {
            if (it->second == k)
                out.add_term(key, c); // idempotent
            continue; // orthogonal labels annihilate
        }
        TLPlusElement::Key nk = key;
        nk.bubbles.emplace(i, k);
        add_canonical(out, std::move(nk), c);
    }
    return out;
}

TLPlusElement apply_box(int idx, int p, const TLPlusElement &x) {
    TLPlusElement out(x.strands());
    BoxElement g = BoxElement::generator(idx, p);
    for (const auto &[key, c] : x.terms()) {
        BoxElement prod = box_mul(g, [&] {
            BoxElement b;
            b.add_term(key.boxes, RatFun::one());
            return b;
        }());
        for (const auto &[m, cc] : prod.terms()) {
            TLPlusElement::Key nk = key;
            nk.boxes = m;
            out.add_term(nk, c * cc);
        }
    }
    return out;
}

TLPlusElement apply_eprime(int i, const TLPlusElement &x);

// One term of the normalized cup-cap stacked on a state with no bubble at
// its own position: multiply the strand diagram and re-canonicalize (the
// fresh top cup may pull neighbouring bubbles down a position and a label).
TLPlusElement stack_eprime(int i, const TLPlusElement::Key &key, const RatFun &c) {
    int s = key.dia.n();
    TLPlusElement out(s);
    TLElement prod = tl_mul(generator_e(i, s, true), TLElement(key.dia));
    for (const auto &[d2, c2] : prod.terms()) {
        TLPlusElement::Key nk = key;
        nk.dia = d2;
        add_canonical(out, std::move(nk), c * c2);
    }
    return out;
}

// The normalized cup-cap meeting its own bubble: expand via the six-term
// exchange relation
//   e'_i c_{k,i} = c_{k+1,i} c_{k,i-1} e'_i + c_{k,i+1} c_{k-1,i} e'_i
//     + c_{k+1,i+1} c_{k,i} c_{k,i-1} b_{-2k,i-1}^{-1}
//     + c_{k,i+1} c_{k,i} c_{k-1,i-1} b_{-2k+1,i-1}
//     - c_{k+1,i+1} c_{k+1,i} c_{k,i-1} b_{-2k-1,i-1}
//     - c_{k,i+1} c_{k-1,i} c_{k-1,i-1} b_{-2k+2,i-1}^{-1},
// applied to the residual state (the bubble at position i removed).
TLPlusElement exchange_eprime(int i, int k, const TLPlusElement::Key &residual,
                              const RatFun &c) {
    int s = residual.dia.n();
    TLPlusElement base(s);
    base.add_term(residual, c);

    TLPlusElement acc(s);
    {
        TLPlusElement t = apply_eprime(i, base);
        acc = acc + apply_c(k + 1, i, apply_c(k, i - 1, t));
        acc = acc + apply_c(k, i + 1, apply_c(k - 1, i, t));
    }
    // Standard-form box index for position i-1 is shifted by i-1.
    auto boxed = [&](int lbl, int p, const std::vector<std::pair<int, int>> &cs) {
        TLPlusElement t = apply_box(lbl + (i - 1), p, base);
        for (auto it = cs.rbegin(); it != cs.rend(); ++it)
            t = apply_c(it->second, it->first, t);
        return t;
    };
    acc = acc + boxed(-2 * k, -1, {{i + 1, k + 1}, {i, k}, {i - 1, k}});
    acc = acc + boxed(-2 * k + 1, 1, {{i + 1, k}, {i, k}, {i - 1, k - 1}});
    acc = acc - boxed(-2 * k - 1, 1, {{i + 1, k + 1}, {i, k + 1}, {i - 1, k}});
    acc = acc - boxed(-2 * k + 2, -1, {{i + 1, k}, {i, k - 1}, {i - 1, k - 1}});
    return acc;
}

TLPlusElement apply_eprime(int i, const TLPlusElement &x) {
    TLPlusElement out(x.strands());
    for (const auto &[key, c] : x.terms()) {
        auto it = key.bubbles.find(i);
        if (it == key.bubbles.end()) {
            out = out + stack_eprime(i, key, c);
        } else {
            TLPlusElement::Key residual = key;
            residual.bubbles.erase(i);
            out = out + exchange_eprime(i, it->second, residual, c);
        }
    }
    return out;
}

} // namespace

TLPlusElement tlplus_apply(const TLPlusToken &t, const TLPlusElement &x) {
    switch (t.kind) {
    case TLPlusToken::E:
        return apply_eprime(t.i, x).scaled(qint(2));
    case TLPlusToken::Eprime:
        return apply_eprime(t.i, x);
    case TLPlusToken::C:
        return apply_c(t.k, t.i, x);
    case TLPlusToken::B:
        return apply_box(t.k + t.i, 1, x);
    case TLPlusToken::Binv:
        return apply_box(t.k + t.i, -1, x);
    }
    return TLPlusElement(x.strands());
}

TLPlusElement tlplus_normal_form(int s, const std::vector<TLPlusToken> &word) {
    TLPlusElement x = TLPlusElement::identity(s);
    for (auto it = word.rbegin(); it != word.rend(); ++it)
        x = tlplus_apply(*it, x);
    return x;
}

// ---------------------------------------------------------------------------
// Local confluence of the critical overlaps.

namespace {

using Word = std::vector<TLPlusToken>;

TLPlusToken tE(int i) { return {TLPlusToken::E, i, 0}; }
TLPlusToken tEp(int i) { return {TLPlusToken::Eprime, i, 0}; }
TLPlusToken tC(int k, int i) { return {TLPlusToken::C, i, k}; }
TLPlusToken tB(int k, int i) { return {TLPlusToken::B, i, k}; }
TLPlusToken tBinv(int k, int i) { return {TLPlusToken::Binv, i, k}; }

// The six words of the exchange relation's right-hand side with signs.
std::vector<std::pair<int, Word>> exchange_words(int i, int k) {
    return {
        {+1, {tC(k + 1, i), tC(k, i - 1), tEp(i)}},
        {+1, {tC(k, i + 1), tC(k - 1, i), tEp(i)}},
        {+1, {tC(k + 1, i + 1), tC(k, i), tC(k, i - 1), tBinv(-2 * k, i - 1)}},
        {+1, {tC(k, i + 1), tC(k, i), tC(k - 1, i - 1), tB(-2 * k + 1, i - 1)}},
        {-1, {tC(k + 1, i + 1), tC(k + 1, i), tC(k, i - 1), tB(-2 * k - 1, i - 1)}},
        {-1, {tC(k, i + 1), tC(k - 1, i), tC(k - 1, i - 1), tBinv(-2 * k + 2, i - 1)}},
    };
}

// Sum of normal forms of the exchange words, each extended by a suffix.
TLPlusElement exchange_sum(int s, int i, int k, const Word &prefix,
                           const Word &suffix) {
    TLPlusElement acc(s);
    for (const auto &[sign, w] : exchange_words(i, k)) {
        Word full = prefix;
        full.insert(full.end(), w.begin(), w.end());
        full.insert(full.end(), suffix.begin(), suffix.end());
        TLPlusElement t = tlplus_normal_form(s, full);
        acc = acc + (sign > 0 ? t : t.scaled(RatFun(-1)));
    }
    return acc;
}

} // namespace

DiamondReport diamond_check(int smax, int kmax) {
    DiamondReport rep;
    rep.pass = true;
    auto record = [&](const std::string &name, int s, int i, int k, bool ok) {
        rep.instances.push_back({name, s, i, k, ok});
        if (!ok)
            rep.pass = false;
    };
    for (int s = 2; s <= smax; ++s)
        for (int i = 1; i <= s - 1; ++i)
            for (int k = 0; k <= kmax; ++k) {
                TLPlusElement ec = tlplus_normal_form(s, {tEp(i), tC(k, i)});

                // (e'_i)^2 c_{k,i}: idempotent first vs exchange first.
                record("esq-c", s, i, k,
                       tlplus_apply(tEp(i), ec) == ec);

                // e_i e_j e'_i c_{k,i} for adjacent j: the braid-like
                // contraction e_i e_j e'_i = e'_i vs exchange first.
                for (int j : {i - 1, i + 1}) {
                    if (j < 1 || j > s - 1)
                        continue;
                    TLPlusElement b =
                        tlplus_apply(tE(i), tlplus_apply(tE(j), ec));
                    record(j < i ? "eee-c-left" : "eee-c-right", s, i, k,
                           b == ec);
                }

                // e'_i c_{k,i}^2: bubble idempotence first vs exchange first.
                record("e-csq", s, i, k,
                       exchange_sum(s, i, k, {}, {tC(k, i)}) == ec);

                // e'_i c_{k,i} (c_{k,i-1} + c_{k-1,i-1}) and
                // e'_i c_{k,i} (c_{k,i+1} + c_{k+1,i+1}): absorption first
                // vs exchange first.
                {
                    TLPlusElement lo =
                        exchange_sum(s, i, k, {}, {tC(k, i - 1)}) +
                        exchange_sum(s, i, k, {}, {tC(k - 1, i - 1)});
                    record("e-c-absorb-low", s, i, k, lo == ec);
                    TLPlusElement hi =
                        exchange_sum(s, i, k, {}, {tC(k, i + 1)}) +
                        exchange_sum(s, i, k, {}, {tC(k + 1, i + 1)});
                    record("e-c-absorb-high", s, i, k, hi == ec);
                }
            }
    return rep;
}

// ---------------------------------------------------------------------------
// Consistency with the diagram evaluation.

namespace {

// Translate a generator word (leftmost factor topmost) into a diagram on s
// upward strands, tracking the scalar factor from unnormalized cup-caps.
FormalDiagram word_to_diagram(int s, const std::vector<TLPlusToken> &word) {
    std::vector<std::vector<Tile>> slices;
    RatFun coeff = RatFun::one();
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
        Tile t;
        switch (it->kind) {
        case TLPlusToken::E:
            coeff *= qint(2);
            [[fallthrough]];
        case TLPlusToken::Eprime:
            t.kind = TileKind::cupcap_up;
            t.pos = it->i - 1;
            break;
        case TLPlusToken::C:
            t.kind = TileKind::bubble;
            t.pos = it->i;
            t.k = it->k;
            break;
        case TLPlusToken::B:
            t.kind = TileKind::box;
            t.pos = it->i;
            t.k = it->k;
            break;
        case TLPlusToken::Binv:
            t.kind = TileKind::box_dagger;
            t.pos = it->i;
            t.k = it->k;
            break;
        }
        slices.push_back({t});
    }
    return formal(make_diagram(SignWord((std::size_t)s, '+'), slices), coeff);
}

// Translate a normal form into a diagram sum: boxes at position 0 on the
// bottom, then the strand diagram as a stack of cup-caps, bubbles on top.
FormalDiagram element_to_diagram(const TLPlusElement &x) {
    int s = x.strands();
    FormalDiagram F;
    F.source = F.target = SignWord((std::size_t)s, '+');
    for (const auto &[key, c] : x.terms()) {
        std::vector<std::vector<Tile>> slices;
        RatFun coeff = c;
        for (const auto &[idx, p] : key.boxes) {
            Tile t;
            t.kind = p > 0 ? TileKind::box : TileKind::box_dagger;
            t.pos = 0;
            t.k = idx;
            for (int r = 0; r < std::abs(p); ++r)
                slices.push_back({t});
        }
        const std::vector<int> &w = diagram_word(key.dia);
        for (auto it = w.rbegin(); it != w.rend(); ++it) {
            Tile t;
            t.kind = TileKind::cupcap_up;
            t.pos = *it - 1;
            slices.push_back({t});
            coeff *= qint(2); // the diagram is the unnormalized product
        }
        if (!key.bubbles.empty()) {
            std::vector<Tile> top;
            for (const auto &[p, k] : key.bubbles) {
                Tile t;
                t.kind = TileKind::bubble;
                t.pos = p;
                t.k = k;
                top.push_back(t);
            }
            slices.push_back(top);
        }
        F.terms.emplace_back(coeff,
                             make_diagram(F.source, slices));
    }
    return F;
}

} // namespace

bool psi_s_consistency(int s, const std::vector<TLPlusToken> &word,
                       const std::vector<int> &levels) {
    FormalDiagram lhs = word_to_diagram(s, word);
    FormalDiagram rhs = element_to_diagram(tlplus_normal_form(s, word));
    for (int n : levels)
        for (int m = n % 2; m <= n; m += 2)
            if (!std_equal(std_eval(lhs, n, m), std_eval(rhs, n, m)))
                return false;
    return true;
}

} // namespace tlweyl
