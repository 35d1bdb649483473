#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tlweyl/tl.hpp"

#include <random>

using namespace tlweyl;

// Catalan-number oracle, independent of the enumerator.
static long catalan(int n) {
    long c = 1;
    for (int k = 0; k < n; ++k)
        c = c * 2 * (2 * k + 1) / (k + 2);
    return c;
}

static TLElement rand_element(int n, std::mt19937 &rng) {
    auto diagrams = enumerate_diagrams(n, n);
    std::uniform_int_distribution<int> pick(0, (int)diagrams.size() - 1);
    std::uniform_int_distribution<int> coef(-3, 3);
    TLElement x(n, n);
    for (int t = 0; t < 3; ++t)
        x.add_term(diagrams[pick(rng)], RatFun(coef(rng)));
    return x;
}

TEST_CASE("diagram counts are Catalan numbers") {
    long expected[] = {1, 1, 2, 5, 14, 42, 132};
    for (int n = 0; n <= 6; ++n) {
        CHECK((long)enumerate_diagrams(n, n).size() == expected[n]);
        CHECK(expected[n] == catalan(n));
    }
    CHECK(enumerate_diagrams(3, 3).size() == 5);
    CHECK(enumerate_diagrams(4, 4).size() == 14);
    CHECK(enumerate_diagrams(2, 0).size() == 1);
    CHECK(enumerate_diagrams(4, 2).size() == 5);
    CHECK_THROWS(enumerate_diagrams(2, 1));
}

TEST_CASE("e' relations") {
    for (int n = 2; n <= 5; ++n) {
        for (int i = 1; i < n; ++i) {
            TLElement e = generator_e(i, n, false);
            CHECK(tl_mul(e, e) == e.scaled(qint(2)));
            TLElement en = generator_e(i, n, true);
            CHECK(tl_mul(en, en) == en);
            CHECK(generator_e(i, n, true) ==
                  generator_e(i, n, false).scaled(qint(2).inv()));
            for (int j = 1; j < n; ++j) {
                TLElement f = generator_e(j, n, false);
                if (std::abs(i - j) >= 2)
                    CHECK(tl_mul(e, f) == tl_mul(f, e));
                if (std::abs(i - j) == 1)
                    CHECK(tl_mul(e, tl_mul(f, e)) == e);
            }
        }
    }
}

TEST_CASE("identity and associativity") {
    std::mt19937 rng(42);
    for (int n = 1; n <= 4; ++n) {
        TLElement id = TLElement::identity(n);
        for (int t = 0; t < 10; ++t) {
            TLElement x = rand_element(n, rng), y = rand_element(n, rng),
                      z = rand_element(n, rng);
            CHECK(tl_mul(id, x) == x);
            CHECK(tl_mul(x, id) == x);
            CHECK(tl_mul(tl_mul(x, y), z) == tl_mul(x, tl_mul(y, z)));
        }
    }
}

TEST_CASE("inclusion is an algebra homomorphism") {
    CHECK(include(TLElement::identity(2)) == TLElement::identity(3));
    CHECK(include(generator_e(1, 2, false)) == generator_e(1, 3, false));
    std::mt19937 rng(5);
    for (int n = 1; n <= 4; ++n)
        for (int t = 0; t < 8; ++t) {
            TLElement x = rand_element(n, rng), y = rand_element(n, rng);
            CHECK(include(tl_mul(x, y)) == tl_mul(include(x), include(y)));
        }
}

TEST_CASE("partial trace") {
    CHECK(ptr(TLElement::identity(1)) ==
          TLElement::identity(0).scaled(qint(2)));
    // trace-like property: ptr_n(include(a) x) = a ptr_n(x)
    std::mt19937 rng(17);
    for (int n = 2; n <= 4; ++n)
        for (int t = 0; t < 8; ++t) {
            TLElement a = rand_element(n - 1, rng), x = rand_element(n, rng);
            CHECK(ptr(tl_mul(include(a), x)) == tl_mul(a, ptr(x)));
            CHECK(ptr(tl_mul(x, include(a))) == tl_mul(ptr(x), a));
        }
    // e'_n x e'_n = e'_n include(ptr_n(x)) for x in TL_n inside TL_{n+1}
    for (int n = 2; n <= 4; ++n)
        for (int t = 0; t < 8; ++t) {
            TLElement x = rand_element(n, rng);
            TLElement en = generator_e(n, n + 1, false);
            CHECK(tl_mul(en, tl_mul(include(x), en)) ==
                  tl_mul(en, include(include(ptr(x)))));
        }
}

TEST_CASE("braid elements") {
    for (int n = 2; n <= 4; ++n)
        for (int i = 1; i < n; ++i) {
            TLElement s = braid_sigma(i, n, false);
            TLElement si = braid_sigma(i, n, true);
            CHECK(tl_mul(s, si) == TLElement::identity(n));
            CHECK(tl_mul(si, s) == TLElement::identity(n));
            // sigma^2 = q^-1 + q^{-1/2}(q - q^-1) sigma
            RatFun v{LaurentPoly::monomial(1)}, q = v * v;
            TLElement rhs = TLElement::identity(n).scaled(q.inv()) +
                            s.scaled(v.inv() * (q - q.inv()));
            CHECK(tl_mul(s, s) == rhs);
        }
    // braid relation
    TLElement s1 = braid_sigma(1, 3, false), s2 = braid_sigma(2, 3, false);
    CHECK(tl_mul(s1, tl_mul(s2, s1)) == tl_mul(s2, tl_mul(s1, s2)));
}

TEST_CASE("Hecke surjections") {
    for (int n = 2; n <= 4; ++n)
        for (auto which : {HeckeMap::psi, HeckeMap::psi_bar, HeckeMap::phi,
                           HeckeMap::phi_bar}) {
            auto rep = hecke_surjection_check(which, n);
            CHECK(rep.quadratic_ok);
            CHECK(rep.braid_ok);
        }
    // Perturbed map t_i -> q sigma_i must fail the quadratic relation.
    RatFun v{LaurentPoly::monomial(1)}, q = v * v;
    TLElement t = braid_sigma(1, 3, false).scaled(q);
    RatFun qbar = q * q;
    TLElement lhs = tl_mul(t, t);
    TLElement rhs = TLElement::identity(3).scaled(qbar) +
                    t.scaled(qbar - RatFun::one());
    CHECK(lhs != rhs);
}

TEST_CASE("reflection is an anti-homomorphism") {
    std::mt19937 rng(3);
    for (int n = 1; n <= 4; ++n)
        for (int t = 0; t < 6; ++t) {
            TLElement x = rand_element(n, rng), y = rand_element(n, rng);
            CHECK(reflect(tl_mul(x, y)) == tl_mul(reflect(y), reflect(x)));
            CHECK(reflect(reflect(x)) == x);
        }
}
