#include "tlweyl/tl.hpp"

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace tlweyl {

// Boundary points in the planar (disk) order: bottom left-to-right is index
// 0..n-1 read right-to-left, so the disk cycle is b0,...,b_{n-1}, t_{m-1},...,t_0.
static std::vector<int> disk_order(int n, int m) {
    std::vector<int> seq;
    seq.reserve(n + m);
    for (int i = 0; i < n; ++i)
        seq.push_back(i);
    for (int j = m - 1; j >= 0; --j)
        seq.push_back(n + j);
    return seq;
}

TLDiagram::TLDiagram(int n, int m, std::vector<int> partner)
    : n_(n), m_(m), partner_(std::move(partner)) {
    if ((int)partner_.size() != n_ + m_)
        throw std::invalid_argument("TLDiagram: partner size mismatch");
    for (int i = 0; i < n_ + m_; ++i) {
        int p = partner_[i];
        if (p < 0 || p >= n_ + m_ || p == i || partner_[p] != i)
            throw std::invalid_argument("TLDiagram: not a perfect matching");
    }
    if (!is_planar())
        throw std::invalid_argument("TLDiagram: crossing matching");
}

TLDiagram TLDiagram::identity(int n) {
    TLDiagram d;
    d.n_ = d.m_ = n;
    d.partner_.resize(2 * n);
    for (int i = 0; i < n; ++i) {
        d.partner_[i] = n + i;
        d.partner_[n + i] = i;
    }
    return d;
}

bool TLDiagram::is_planar() const {
    std::vector<int> seq = disk_order(n_, m_);
    std::vector<int> stack;
    for (int p : seq) {
        if (!stack.empty() && stack.back() == partner_[p])
            stack.pop_back();
        else
            stack.push_back(p);
    }
    return stack.empty();
}

bool TLDiagram::operator<(const TLDiagram &o) const {
    if (n_ != o.n_)
        return n_ < o.n_;
    if (m_ != o.m_)
        return m_ < o.m_;
    return partner_ < o.partner_;
}

std::string TLDiagram::str() const {
    std::ostringstream os;
    os << "[" << n_ << "->" << m_ << ":";
    for (int i = 0; i < n_ + m_; ++i)
        if (partner_[i] > i)
            os << " (" << i << "," << partner_[i] << ")";
    os << "]";
    return os.str();
}

// Enumerate non-crossing perfect matchings of seq[lo..hi] (inclusive), as
// partner assignments written into `partner`.
static void enum_rec(const std::vector<int> &seq, int lo, int hi,
                     std::vector<int> &partner,
                     std::vector<std::vector<int>> &out) {
    if (lo > hi) {
        out.push_back(partner);
        return;
    }
    for (int j = lo + 1; j <= hi; j += 2) {
        partner[seq[lo]] = seq[j];
        partner[seq[j]] = seq[lo];
        std::vector<int> saved = partner;
        // Inner stretch lo+1..j-1 and outer stretch j+1..hi are independent;
        // combine by nesting (inner choices, then outer choices).
        std::vector<std::vector<int>> inner;
        enum_rec(seq, lo + 1, j - 1, partner, inner);
        for (auto &pi : inner) {
            std::vector<int> p2 = pi;
            std::vector<std::vector<int>> outer;
            enum_rec(seq, j + 1, hi, p2, outer);
            for (auto &po : outer)
                out.push_back(po);
        }
        partner = saved;
    }
}

std::vector<TLDiagram> enumerate_diagrams(int n, int m) {
    std::vector<TLDiagram> result;
    if (((n + m) % 2) != 0)
        throw std::invalid_argument("enumerate_diagrams: parity mismatch");
    std::vector<int> seq = disk_order(n, m);
    std::vector<int> partner(n + m, -1);
    std::vector<std::vector<int>> raw;
    if (n + m == 0) {
        result.emplace_back(0, 0, std::vector<int>{});
        return result;
    }
    enum_rec(seq, 0, n + m - 1, partner, raw);
    result.reserve(raw.size());
    for (auto &p : raw)
        result.emplace_back(n, m, p);
    return result;
}

TLElement::TLElement(const TLDiagram &d, const RatFun &c) : n_(d.n()), m_(d.m()) {
    if (!c.is_zero())
        terms_.emplace(d, c);
}

TLElement TLElement::identity(int n) { return TLElement(TLDiagram::identity(n)); }

void TLElement::add_term(const TLDiagram &d, const RatFun &c) {
    if (d.n() != n_ || d.m() != m_)
        throw std::invalid_argument("TLElement: diagram shape mismatch");
    auto it = terms_.find(d);
    if (it == terms_.end()) {
        if (!c.is_zero())
            terms_.emplace(d, c);
    } else {
        it->second += c;
        if (it->second.is_zero())
            terms_.erase(it);
    }
}

RatFun TLElement::coeff(const TLDiagram &d) const {
    auto it = terms_.find(d);
    return it == terms_.end() ? RatFun::zero() : it->second;
}

TLElement TLElement::operator+(const TLElement &o) const {
    if (n_ != o.n_ || m_ != o.m_)
        throw std::invalid_argument("TLElement: shape mismatch in +");
    TLElement r = *this;
    for (const auto &[d, c] : o.terms_)
        r.add_term(d, c);
    return r;
}

TLElement &TLElement::operator+=(const TLElement &o) { return *this = *this + o; }

TLElement TLElement::operator-(const TLElement &o) const {
    return *this + o.scaled(RatFun(-1));
}

TLElement TLElement::operator-() const { return scaled(RatFun(-1)); }

TLElement TLElement::scaled(const RatFun &c) const {
    TLElement r(n_, m_);
    if (c.is_zero())
        return r;
    for (const auto &[d, co] : terms_)
        r.terms_.emplace(d, co * c);
    return r;
}

std::string TLElement::str() const {
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto &[d, c] : terms_) {
        if (!first)
            os << " + ";
        first = false;
        os << c.str() << "*" << d.str();
    }
    return os.str();
}

TLDiagram tl_compose_diagrams(const TLDiagram &upper, const TLDiagram &lower,
                              int &loops) {
    int n = lower.n(), k = lower.m(), m = upper.m();
    if (upper.n() != k)
        throw std::invalid_argument("tl_compose: boundary counts mismatch");
    // Combined point ids: lower 0..n+k-1, then upper offset by n+k.
    const int NL = n + k, NU = k + m;
    auto lower_top = [&](int j) { return n + j; };
    auto upper_bot = [&](int j) { return NL + j; };
    auto upper_top = [&](int j) { return NL + k + j; };
    // Partner within own diagram, glue lower_top(j) <-> upper_bot(j).
    auto partner_of = [&](int pt) {
        if (pt < NL)
            return lower.partner()[pt];
        return NL + upper.partner()[pt - NL];
    };
    auto glue_of = [&](int pt) -> int {
        if (pt >= n && pt < NL)
            return upper_bot(pt - n);
        if (pt >= NL && pt < NL + k)
            return lower_top(pt - NL);
        return -1;
    };
    std::vector<char> visited(NL + NU, 0);
    std::vector<int> result(n + m, -1);
    auto boundary_id = [&](int pt) -> int {
        if (pt < n)
            return pt; // result bottom
        if (pt >= NL + k)
            return n + (pt - NL - k); // result top
        return -1;
    };
    for (int start = 0; start < NL + NU; ++start) {
        int bid = boundary_id(start);
        if (bid < 0 || visited[start])
            continue;
        visited[start] = 1;
        int cur = start;
        for (;;) {
            int nxt = partner_of(cur);
            visited[nxt] = 1;
            int nb = boundary_id(nxt);
            if (nb >= 0) {
                result[bid] = nb;
                result[nb] = bid;
                break;
            }
            cur = glue_of(nxt);
            visited[cur] = 1;
        }
    }
    loops = 0;
    for (int p = 0; p < NL + NU; ++p) {
        if (visited[p] || boundary_id(p) >= 0)
            continue;
        ++loops;
        int cur = p;
        while (!visited[cur]) {
            visited[cur] = 1;
            int nxt = partner_of(cur);
            visited[nxt] = 1;
            cur = glue_of(nxt);
        }
    }
    return TLDiagram(n, m, result);
}

TLElement tl_compose(const TLElement &upper, const TLElement &lower) {
    if (upper.n() != lower.m())
        throw std::invalid_argument("tl_compose: boundary counts mismatch");
    TLElement r(lower.n(), upper.m());
    // Coefficient values repeat heavily across terms, so dedupe them, memoize
    // the pair products, and accumulate per output diagram grouped by
    // denominator (polynomial adds) instead of one rational add per pair.
    std::map<RatFun, int> id_of;
    auto value_id = [&id_of](const RatFun &c) {
        return id_of.emplace(c, (int)id_of.size()).first->second;
    };
    std::vector<std::pair<const TLDiagram *, int>> up, lo;
    for (const auto &[d, c] : upper.terms())
        up.emplace_back(&d, value_id(c));
    for (const auto &[d, c] : lower.terms())
        lo.emplace_back(&d, value_id(c));
    std::vector<const RatFun *> vals(id_of.size());
    for (const auto &[c, i] : id_of)
        vals[i] = &c;

    if (vals.empty())
        return r;

    // Fraction-free fast path: put every coefficient over the common
    // denominator D (the lcm of all denominators, found by factoring them
    // into quantum-integer factors) and a common integer scalar S, so the
    // bilinear accumulation runs on dense integer polynomials with
    // mpz_addmul, and only one rational reduction happens per output diagram.
    std::map<int, int> dmax; // factor index -> max multiplicity
    std::vector<std::vector<std::pair<int, int>>> dfacs(vals.size());
    bool fast = true;
    for (size_t i = 0; i < vals.size() && fast; ++i) {
        if (vals[i]->den().is_one())
            continue;
        fast = detail::cheb_factorize(vals[i]->den(), dfacs[i]);
        for (const auto &[k, m] : dfacs[i])
            dmax[k] = std::max(dmax[k], m);
    }

    if (!fast) {
        // Generic path: memoized rational products per (value, value, loops).
        RatFun two = qint(2);
        std::unordered_map<std::uint64_t, RatFun> prod_memo;
        std::map<TLDiagram, RatFun> acc;
        for (const auto &[du, iu] : up)
            for (const auto &[dl, il] : lo) {
                int loops = 0;
                TLDiagram d = tl_compose_diagrams(*du, *dl, loops);
                std::uint64_t key = ((std::uint64_t)iu << 40) |
                                    ((std::uint64_t)il << 8) | (unsigned)loops;
                auto [it, fresh] = prod_memo.try_emplace(key, RatFun());
                if (fresh) {
                    RatFun c = *vals[iu] * *vals[il];
                    for (int i = 0; i < loops; ++i)
                        c *= two;
                    it->second = std::move(c);
                }
                if (!it->second.is_zero())
                    acc[std::move(d)] += it->second;
            }
        for (const auto &[d, c] : acc)
            r.add_term(d, c);
        return r;
    }

    // Dense integer numerator of each value: value_i = (shat_i / S) *
    // v^off_i * sum_k N_i[k] v^k / D.
    LaurentPoly dcommon = LaurentPoly::one();
    for (const auto &[k, m] : dmax)
        for (int i = 0; i < m; ++i)
            dcommon = dcommon * detail::cheb_factor(k);

    size_t nv = vals.size();
    std::vector<std::vector<mpz_class>> nums(nv);
    std::vector<int> offs(nv);
    std::vector<mpq_class> scales(nv);
    mpz_class sden = 1;
    for (size_t i = 0; i < nv; ++i) {
        // Cofactor D / den_i as a product of leftover factors.
        std::map<int, int> need = dmax;
        for (const auto &[k, m] : dfacs[i])
            need[k] -= m;
        LaurentPoly cof = LaurentPoly::one();
        for (const auto &[k, m] : need)
            for (int j = 0; j < m; ++j)
                cof = cof * detail::cheb_factor(k);
        LaurentPoly nt = vals[i]->num() * cof;
        // Split off the rational content, leaving a primitive integer vector.
        mpz_class den_lcm = 1;
        for (const auto &[e, c] : nt.terms())
            mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(),
                    c.get_den().get_mpz_t());
        offs[i] = nt.min_exp();
        std::vector<mpz_class> vec(nt.max_exp() - nt.min_exp() + 1, 0);
        mpz_class content = 0;
        for (const auto &[e, c] : nt.terms()) {
            vec[e - offs[i]] = c.get_num() * (den_lcm / c.get_den());
            mpz_gcd(content.get_mpz_t(), content.get_mpz_t(),
                    vec[e - offs[i]].get_mpz_t());
        }
        if (content > 1)
            for (auto &c : vec)
                c /= content;
        nums[i] = std::move(vec);
        scales[i] = mpq_class(content, den_lcm);
        scales[i].canonicalize();
        mpz_lcm(sden.get_mpz_t(), sden.get_mpz_t(),
                scales[i].get_den().get_mpz_t());
    }
    std::vector<mpz_class> shat(nv);
    for (size_t i = 0; i < nv; ++i)
        shat[i] = scales[i].get_num() * (sden / scales[i].get_den());

    // Dense integer coefficients of [2]^l on exponents -2l..2l.
    std::vector<std::vector<mpz_class>> two_pow{{mpz_class(1)}};
    auto two_power = [&two_pow](int l) -> const std::vector<mpz_class> & {
        while ((int)two_pow.size() <= l) {
            const auto &p = two_pow.back();
            std::vector<mpz_class> q(p.size() + 4, 0);
            for (size_t i = 0; i < p.size(); ++i) {
                q[i] += p[i];
                q[i + 4] += p[i];
            }
            two_pow.push_back(std::move(q));
        }
        return two_pow[l];
    };

    struct Dense {
        std::vector<mpz_class> coeffs;
        int off = 0;
        mpz_class sfac;
    };
    std::unordered_map<std::uint64_t, Dense> prod_memo;
    struct DiagramHash {
        size_t operator()(const TLDiagram &d) const {
            size_t h = (size_t)d.n() * 1000003u + d.m();
            for (int p : d.partner())
                h = h * 1099511628211ull + (size_t)p;
            return h;
        }
    };
    std::unordered_map<TLDiagram, std::unordered_map<std::uint64_t, long>,
                       DiagramHash>
        acc;
    for (const auto &[du, iu] : up)
        for (const auto &[dl, il] : lo) {
            int loops = 0;
            TLDiagram d = tl_compose_diagrams(*du, *dl, loops);
            std::uint64_t key = ((std::uint64_t)iu << 40) |
                                ((std::uint64_t)il << 8) | (unsigned)loops;
            auto [it, fresh] = prod_memo.try_emplace(key);
            if (fresh) {
                const auto &a = nums[iu], &b = nums[il];
                std::vector<mpz_class> ab(a.size() + b.size() - 1, 0);
                for (size_t i = 0; i < a.size(); ++i)
                    if (a[i] != 0)
                        for (size_t j = 0; j < b.size(); ++j)
                            mpz_addmul(ab[i + j].get_mpz_t(),
                                       a[i].get_mpz_t(), b[j].get_mpz_t());
                Dense &dd = it->second;
                if (loops == 0) {
                    dd.coeffs = std::move(ab);
                } else {
                    const auto &tw = two_power(loops);
                    dd.coeffs.assign(ab.size() + tw.size() - 1, 0);
                    for (size_t i = 0; i < ab.size(); ++i)
                        if (ab[i] != 0)
                            for (size_t j = 0; j < tw.size(); ++j)
                                mpz_addmul(dd.coeffs[i + j].get_mpz_t(),
                                           ab[i].get_mpz_t(),
                                           tw[j].get_mpz_t());
                }
                dd.off = offs[iu] + offs[il] - 2 * loops;
                dd.sfac = shat[iu] * shat[il];
            }
            ++acc[std::move(d)][key];
        }

    LaurentPoly den2 = dcommon * dcommon;
    mpz_class sden2 = sden * sden;
    for (const auto &[d, by_prod] : acc) {
        int lo_exp = 0, hi_exp = 0;
        bool first = true;
        for (const auto &[key, count] : by_prod) {
            const Dense &dd = prod_memo[key];
            int l = dd.off, h = dd.off + (int)dd.coeffs.size() - 1;
            if (first) {
                lo_exp = l;
                hi_exp = h;
                first = false;
            } else {
                lo_exp = std::min(lo_exp, l);
                hi_exp = std::max(hi_exp, h);
            }
        }
        std::vector<mpz_class> total(hi_exp - lo_exp + 1, 0);
        mpz_class t;
        for (const auto &[key, count] : by_prod) {
            const Dense &dd = prod_memo[key];
            t = dd.sfac * count;
            for (size_t i = 0; i < dd.coeffs.size(); ++i)
                if (dd.coeffs[i] != 0)
                    mpz_addmul(total[dd.off - lo_exp + i].get_mpz_t(),
                               t.get_mpz_t(), dd.coeffs[i].get_mpz_t());
        }
        LaurentPoly num;
        for (size_t i = 0; i < total.size(); ++i)
            if (total[i] != 0) {
                mpq_class c(total[i], sden2);
                c.canonicalize();
                num.set_coeff(lo_exp + (int)i, c);
            }
        if (!num.is_zero())
            r.add_term(d, RatFun(num, den2));
    }
    return r;
}

TLElement generator_e(int i, int n, bool normalized) {
    if (i < 1 || i > n - 1)
        throw std::invalid_argument("generator_e: index out of range");
    std::vector<int> partner(2 * n);
    for (int j = 0; j < n; ++j) {
        partner[j] = n + j;
        partner[n + j] = j;
    }
    partner[i - 1] = i;
    partner[i] = i - 1;
    partner[n + i - 1] = n + i;
    partner[n + i] = n + i - 1;
    TLElement e{TLDiagram(n, n, partner)};
    if (normalized)
        e = e.scaled(qint(2).inv());
    return e;
}

TLDiagram include_diagram(const TLDiagram &d) {
    int n = d.n(), m = d.m();
    std::vector<int> partner(n + m + 2, -1);
    auto remap = [&](int i) { return i < n ? i : i + 1; };
    for (int i = 0; i < n + m; ++i)
        partner[remap(i)] = remap(d.partner()[i]);
    partner[n] = n + 1 + m;
    partner[n + 1 + m] = n;
    return TLDiagram(n + 1, m + 1, partner);
}

TLElement include(const TLElement &x) {
    TLElement r(x.n() + 1, x.m() + 1);
    for (const auto &[d, c] : x.terms())
        r.add_term(include_diagram(d), c);
    return r;
}

TLElement ptr(const TLElement &x) {
    int n = x.n(), m = x.m();
    if (n < 1 || m < 1)
        throw std::invalid_argument("ptr: needs at least one strand");
    TLElement r(n - 1, m - 1);
    const int bl = n - 1, tl = n + m - 1; // leftmost bottom / top point
    for (const auto &[d, c] : x.terms()) {
        std::vector<int> partner(n + m - 2, -1);
        auto remap = [&](int i) { return i < n ? i : i - 1; };
        RatFun co = c;
        if (d.partner()[bl] == tl) {
            for (int i = 0; i < n + m; ++i)
                if (i != bl && i != tl)
                    partner[remap(i)] = remap(d.partner()[i]);
            co *= qint(2); // the closed strand makes a loop
        } else {
            int a = d.partner()[bl], b = d.partner()[tl];
            for (int i = 0; i < n + m; ++i) {
                if (i == bl || i == tl)
                    continue;
                int p = d.partner()[i];
                if (i == a)
                    p = b;
                else if (i == b)
                    p = a;
                partner[remap(i)] = remap(p);
            }
        }
        r.add_term(TLDiagram(n - 1, m - 1, partner), co);
    }
    return r;
}

TLDiagram reflect_diagram(const TLDiagram &d) {
    int n = d.n(), m = d.m();
    std::vector<int> partner(n + m, -1);
    auto remap = [&](int i) { return i < n ? m + i : i - n; };
    for (int i = 0; i < n + m; ++i)
        partner[remap(i)] = remap(d.partner()[i]);
    return TLDiagram(m, n, partner);
}

TLElement reflect(const TLElement &x) {
    TLElement r(x.m(), x.n());
    for (const auto &[d, c] : x.terms())
        r.add_term(reflect_diagram(d), c);
    return r;
}

TLElement braid_sigma(int i, int n, bool inverse) {
    RatFun v{LaurentPoly::monomial(1)};
    RatFun vinv{LaurentPoly::monomial(-1)};
    TLElement sigma =
        TLElement::identity(n).scaled(v) + generator_e(i, n, false).scaled(-vinv);
    if (!inverse)
        return sigma;
    // Solve the quadratic relation: sigma^{-1} = q*sigma - q^{1/2}(q - q^{-1}).
    RatFun q = v * v, qih = vinv;
    (void)qih;
    return sigma.scaled(q) -
           TLElement::identity(n).scaled(v * (q - q.inv()));
}

HeckeReport hecke_surjection_check(HeckeMap which, int n) {
    if (n < 2)
        throw std::invalid_argument("hecke_surjection_check: n >= 2 required");
    RatFun v{LaurentPoly::monomial(1)};
    RatFun q = v * v;
    RatFun qbar, scale;
    bool inverse = false;
    switch (which) {
    case HeckeMap::psi: // t_i -> q^{3/2} sigma_i, qbar = q^2
        scale = v * v * v;
        qbar = q * q;
        break;
    case HeckeMap::psi_bar: // t_i -> q^{-3/2} sigma_i^{-1}, qbar = q^{-2}
        scale = (v * v * v).inv();
        qbar = (q * q).inv();
        inverse = true;
        break;
    case HeckeMap::phi: // t_i -> -q^{-1/2} sigma_i, qbar = q^{-2}
        scale = -v.inv();
        qbar = (q * q).inv();
        break;
    case HeckeMap::phi_bar: // t_i -> -q^{1/2} sigma_i^{-1}, qbar = q^2
        scale = -v;
        qbar = q * q;
        inverse = true;
        break;
    }
    std::vector<TLElement> t;
    for (int i = 1; i <= n - 1; ++i)
        t.push_back(braid_sigma(i, n, inverse).scaled(scale));
    HeckeReport rep;
    rep.quadratic_ok = true;
    for (const auto &ti : t) {
        // t_i^2 = qbar + (qbar - 1) t_i
        TLElement lhs = tl_mul(ti, ti);
        TLElement rhs =
            TLElement::identity(n).scaled(qbar) + ti.scaled(qbar - RatFun::one());
        if (lhs != rhs)
            rep.quadratic_ok = false;
    }
    rep.braid_ok = true;
    for (int i = 0; i + 1 < (int)t.size(); ++i) {
        TLElement lhs = tl_mul(t[i], tl_mul(t[i + 1], t[i]));
        TLElement rhs = tl_mul(t[i + 1], tl_mul(t[i], t[i + 1]));
        if (lhs != rhs)
            rep.braid_ok = false;
    }
    return rep;
}

} // namespace tlweyl
