#include "tlweyl/jw.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

namespace tlweyl {

const TLElement &jones_wenzl(int n) {
    static std::map<int, TLElement> cache;
    static std::mutex mu;
    if (n < 0)
        throw std::invalid_argument("jones_wenzl: negative level");
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end())
        return it->second;
    int k = 0;
    while (cache.count(k))
        ++k;
    for (; k <= n; ++k) {
        TLElement f;
        if (k <= 1) {
            f = TLElement::identity(k);
        } else {
            // f^(k) = f^(k-1) - ([k-1]/[k]) f^(k-1) e'_{k-1} f^(k-1), with
            // the unnormalized cup-cap generator (f^(2) = id - e'_1/[2]).
            TLElement prev = include(cache.at(k - 1));
            TLElement e = generator_e(k - 1, k, false);
            f = prev -
                tl_mul(prev, tl_mul(e, prev)).scaled(qint(k - 1) / qint(k));
        }
        cache.emplace(k, std::move(f));
    }
    return cache.at(n);
}

static void paths_rec(int n, int m, Path &cur, std::vector<Path> &out) {
    int k = (int)cur.size();
    int val = k == 0 ? 0 : cur.back();
    if (k == n) {
        if (val == m)
            out.push_back(cur);
        return;
    }
    // prune: must be able to reach m
    int left = n - k;
    if (std::abs(val - m) > left)
        return;
    for (int step : {+1, -1}) {
        int nv = val + step;
        if (nv < 0)
            continue;
        cur.push_back(nv);
        paths_rec(n, m, cur, out);
        cur.pop_back();
    }
}

std::vector<Path> enumerate_paths(int n, int m) {
    std::vector<Path> out;
    if (n < 0 || m < 0 || m > n || ((n - m) % 2) != 0)
        return out;
    Path cur;
    paths_rec(n, m, cur, out);
    return out;
}

std::vector<Path> enumerate_all_paths(int n) {
    std::vector<Path> out;
    for (int m = n % 2; m <= n; m += 2) {
        auto v = enumerate_paths(n, m);
        out.insert(out.end(), v.begin(), v.end());
    }
    return out;
}

long path_count(int n, int m) { return (long)enumerate_paths(n, m).size(); }

bool path_is_valid(const Path &p) {
    int prev = 0;
    for (int v : p) {
        if (v < 0 || std::abs(v - prev) != 1)
            return false;
        prev = v;
    }
    return !p.empty() ? p[0] == 1 : true;
}

// The cap element (k+1 strands -> k-1): the two leftmost bottom points are
// joined, the rest run vertically.
static TLElement left_cap(int k) {
    int nb = k + 1, nt = k - 1;
    std::vector<int> partner(nb + nt, -1);
    for (int i = 0; i < nt; ++i) {
        partner[i] = nb + i;
        partner[nb + i] = i;
    }
    partner[nb - 2] = nb - 1;
    partner[nb - 1] = nb - 2;
    return TLElement(TLDiagram(nb, nt, partner));
}

TLElement path_vector(const Path &p) {
    if (!path_is_valid(p))
        throw std::invalid_argument("path_vector: invalid path");
    if (p.empty())
        return TLElement::identity(0);
    TLElement u = TLElement::identity(1);
    for (size_t k = 1; k < p.size(); ++k) {
        TLElement wider = include(u); // new strand on the left
        if (p[k] == p[k - 1] + 1)
            u = tl_compose(jones_wenzl(p[k]), wider);
        else
            u = tl_compose(left_cap(p[k - 1]), wider);
    }
    return u;
}

RatFun gram_factor(const Path &p) {
    RatFun g = RatFun::one();
    for (size_t k = 1; k < p.size(); ++k)
        if (p[k] == p[k - 1] - 1)
            g *= qint(p[k - 1]) / qint(p[k - 1] + 1);
    return g;
}

TLElement matrix_unit(const Path &p, const Path &r) {
    if (p.empty() || r.empty() || p.back() != r.back() || p.size() != r.size())
        throw std::invalid_argument("matrix_unit: endpoint mismatch");
    return tl_compose(reflect(path_vector(p)), path_vector(r))
        .scaled(gram_factor(r));
}

TLElement central_idempotent(int n, int m) {
    TLElement z(n, n);
    if (n == 0 && m == 0)
        return TLElement::identity(0);
    for (const auto &p : enumerate_paths(n, m))
        z += matrix_unit(p, p);
    return z;
}

RatFun id_coeff(const TLElement &x) {
    if (x.n() != x.m())
        return RatFun::zero();
    return x.coeff(TLDiagram::identity(x.n()));
}

RatFun c_coeff(const Path &r, bool variant_a) {
    int n = (int)r.size();
    if (n < 1)
        throw std::invalid_argument("c_coeff: empty path");
    int rn = r[n - 1];
    int rn1 = n >= 2 ? r[n - 2] : 0;
    long cnt = variant_a ? path_count(n, rn1) : path_count(n - 1, rn1);
    if (cnt == 0)
        throw std::logic_error("c_coeff: empty path count");
    return (qint(rn1 + 1) / qint(rn + 1)) * RatFun(mpq_class(1, cnt));
}

} // namespace tlweyl
