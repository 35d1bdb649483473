#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tlweyl/jw.hpp"

using namespace tlweyl;

// Ballot-number oracle via the Catalan-triangle recursion, independent of the
// path enumerator.
static long ballot(int n, int m) {
    if (n == 0)
        return m == 0 ? 1 : 0;
    if (m < 0 || m > n || ((n - m) % 2) != 0)
        return 0;
    return ballot(n - 1, m - 1) + ballot(n - 1, m + 1);
}

TEST_CASE("Jones-Wenzl base cases and frozen expansions") {
    CHECK(jones_wenzl(0) == TLElement::identity(0));
    CHECK(jones_wenzl(1) == TLElement::identity(1));
    // f^(2) = id - (1/[2]) e'_1
    CHECK(jones_wenzl(2) ==
          TLElement::identity(2) - generator_e(1, 2, true));
    // f^(3) = id - ([2]/[3])(e'_1 + e'_2) + (1/[3])(e'_1 e'_2 + e'_2 e'_1)
    TLElement e1 = generator_e(1, 3, false), e2 = generator_e(2, 3, false);
    TLElement f3 = TLElement::identity(3) -
                   (e1 + e2).scaled(qint(2) / qint(3)) +
                   (tl_mul(e1, e2) + tl_mul(e2, e1)).scaled(qint(3).inv());
    CHECK(jones_wenzl(3) == f3);
}

TEST_CASE("Jones-Wenzl idempotence and annihilation, n <= 8") {
    for (int n = 0; n <= 8; ++n) {
        const TLElement &f = jones_wenzl(n);
        CHECK(tl_mul(f, f) == f);
        for (int i = 1; i < n; ++i) {
            TLElement e = generator_e(i, n, false);
            CHECK(tl_mul(e, f).is_zero());
            CHECK(tl_mul(f, e).is_zero());
        }
    }
}

TEST_CASE("partial trace of Jones-Wenzl") {
    for (int n = 1; n <= 8; ++n)
        CHECK(ptr(jones_wenzl(n)) ==
              jones_wenzl(n - 1).scaled(qint(n + 1) / qint(n)));
}

TEST_CASE("ballot path enumeration") {
    auto p42 = enumerate_paths(4, 2);
    CHECK(p42.size() == 3);
    // frozen set from the spec
    auto has = [&](Path q) {
        for (auto &p : p42)
            if (p == q)
                return true;
        return false;
    };
    CHECK(has({1, 2, 1, 2}));
    CHECK(has({1, 0, 1, 2}));
    CHECK(has({1, 2, 3, 2}));
    CHECK(enumerate_paths(2, 0) == std::vector<Path>{{1, 0}});
    for (int n = 0; n <= 10; ++n)
        for (int m = 0; m <= n; ++m)
            CHECK(path_count(n, m) == ballot(n, m));
    // sum of squares = Catalan
    long cat[] = {1, 1, 2, 5, 14, 42, 132};
    for (int n = 0; n <= 6; ++n) {
        long s = 0;
        for (int m = 0; m <= n; ++m)
            s += path_count(n, m) * path_count(n, m);
        CHECK(s == cat[n]);
    }
}

TEST_CASE("path vectors and Gram factors") {
    // ascending path gives the Jones-Wenzl projector
    for (int n = 1; n <= 5; ++n) {
        Path asc;
        for (int i = 1; i <= n; ++i)
            asc.push_back(i);
        CHECK(path_vector(asc) == jones_wenzl(n));
        CHECK(gram_factor(asc) == RatFun::one());
    }
    // p = (1,0): the single cup
    TLElement cup = path_vector({1, 0});
    CHECK(cup.n() == 2);
    CHECK(cup.m() == 0);
    CHECK(cup.terms().size() == 1);
    CHECK(gram_factor({1, 0}) == qint(1) / qint(2));
    CHECK(gram_factor({1, 2, 1}) == qint(2) / qint(3));
    // absorption: f^(p_n) o u_p = u_p, and the Gram property
    for (int n = 1; n <= 5; ++n)
        for (const auto &p : enumerate_all_paths(n)) {
            TLElement u = path_vector(p);
            CHECK(tl_compose(jones_wenzl(p.back()), u) == u);
            for (const auto &r : enumerate_all_paths(n)) {
                if (p.back() != r.back())
                    continue;
                TLElement pair = tl_compose(path_vector(p), reflect(path_vector(r)));
                if (p == r)
                    CHECK(pair ==
                          jones_wenzl(p.back()).scaled(gram_factor(p).inv()));
                else
                    CHECK(pair.is_zero());
            }
        }
}

TEST_CASE("matrix unit calculus, n <= 4") {
    for (int n = 1; n <= 4; ++n) {
        auto paths = enumerate_all_paths(n);
        for (const auto &p : paths)
            for (const auto &r : paths) {
                if (p.back() != r.back())
                    continue;
                TLElement epr = matrix_unit(p, r);
                for (const auto &s : paths)
                    for (const auto &t : paths) {
                        if (s.back() != t.back())
                            continue;
                        TLElement est = matrix_unit(s, t);
                        TLElement prod = tl_mul(epr, est);
                        if (r == s)
                            CHECK(prod == matrix_unit(p, t));
                        else
                            CHECK(prod.is_zero());
                    }
            }
    }
    // ascending diagonal unit is the Jones-Wenzl projector
    CHECK(matrix_unit({1, 2, 3}, {1, 2, 3}) == jones_wenzl(3));
}

TEST_CASE("completeness and central idempotents, n <= 5") {
    for (int n = 0; n <= 5; ++n) {
        TLElement total(n, n);
        for (int m = n % 2; m <= n; m += 2) {
            TLElement z = central_idempotent(n, m);
            CHECK(tl_mul(z, z) == z);
            total += z;
            // orthogonality
            for (int m2 = n % 2; m2 < m; m2 += 2)
                CHECK(tl_mul(z, central_idempotent(n, m2)).is_zero());
        }
        CHECK(total == TLElement::identity(n));
        // centrality against the generators
        for (int m = n % 2; m <= n; m += 2) {
            TLElement z = central_idempotent(n, m);
            for (int i = 1; i < n; ++i) {
                TLElement e = generator_e(i, n, false);
                CHECK(tl_mul(z, e) == tl_mul(e, z));
            }
        }
    }
    CHECK(central_idempotent(4, 4) == jones_wenzl(4));
}

TEST_CASE("induction identity for central idempotents, n <= 5") {
    // z^n_m = sum_{r in P^{n-1}_{m+1}} ([m+1]/[m+2]) u'_r e'_{n-1} u'_r-dual
    //       + sum_{r in P^{n-1}_{m-1}} u'_r f^(m) u'_r-dual
    // where u'_r = include(u_r) dressed to level n and the dual carries 1/g_r.
    for (int n = 1; n <= 5; ++n)
        for (int m = n % 2; m <= n; m += 2) {
            TLElement rhs(n, n);
            for (const auto &r : enumerate_paths(n - 1, m + 1)) {
                TLElement v = include(path_vector(r)); // n -> m+2
                TLElement term = tl_compose(
                    reflect(v), tl_compose(generator_e(m + 1, m + 2, false),
                                           v));
                rhs += term.scaled((qint(m + 1) / qint(m + 2)) *
                                   gram_factor(r));
            }
            for (const auto &r : enumerate_paths(n - 1, m - 1)) {
                TLElement v = include(path_vector(r)); // n -> m
                TLElement term =
                    tl_compose(reflect(v), tl_compose(jones_wenzl(m), v));
                rhs += term.scaled(gram_factor(r));
            }
            CHECK(central_idempotent(n, m) == rhs);
        }
}
