#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "tlweyl/boxalg.hpp"

#include <random>

using namespace tlweyl;

namespace {

BoxElement random_box(std::mt19937 &rng, int max_index, int max_factors) {
    std::uniform_int_distribution<int> nterms(1, 3);
    std::uniform_int_distribution<int> idx(-1, max_index);
    std::uniform_int_distribution<int> nfac(0, max_factors);
    std::uniform_int_distribution<int> coef(-3, 3);
    BoxElement x;
    int t = nterms(rng);
    for (int a = 0; a < t; ++a) {
        BoxElement::Mono m;
        int f = nfac(rng);
        for (int b = 0; b < f; ++b)
            ++m[idx(rng)];
        int c = coef(rng);
        if (c == 0)
            c = 1;
        x.add_term(m, RatFun(c));
    }
    return x;
}

} // namespace

TEST_CASE("brace sequence values and palindromicity") {
    CHECK(brace(0) == LaurentPoly::one());
    CHECK(brace(-3) == LaurentPoly::zero());
    CHECK(brace(1) == quantum_int(2));
    // {2} = [2]^2 - 1 = [3] = v^4 + 1 + v^-4
    LaurentPoly two = LaurentPoly::monomial(4) + LaurentPoly::one() +
                      LaurentPoly::monomial(-4);
    CHECK(brace(2) == two);
    // {m} coincides with the quantum integer [m+1] in q
    for (int m = 0; m <= 8; ++m)
        CHECK(brace(m) == quantum_int(m + 1));
    for (int m = 0; m <= 12; ++m) {
        for (int j = 0; j <= m; ++j)
            CHECK(brace_coeff(m, j) == brace_coeff(m, m - j));
        // the listed coefficients exhaust the polynomial
        mpq_class total(0);
        for (int j = 0; j <= m; ++j)
            total += brace_coeff(m, j);
        mpq_class direct(0);
        if (brace(m) != LaurentPoly::zero())
            for (int e = brace(m).min_exp(); e <= brace(m).max_exp(); ++e)
                direct += brace(m).coeff(e);
        CHECK(total == direct);
    }
}

TEST_CASE("box products against closed forms") {
    for (int k : {1, 3, 5}) {
        BoxElement lhs = box_mul(BoxElement::generator(k), BoxElement::generator(k - 1));
        BoxElement rhs = BoxElement::generator(k).scaled(qint(2)) -
                         BoxElement::one();
        CHECK(lhs == rhs);
    }
    // b_k * b_k stays a square
    BoxElement sq = box_mul(BoxElement::generator(2), BoxElement::generator(2));
    CHECK(sq == BoxElement::generator(2, 2));
    // b_2 * b_0 = ({2} b_2 + b_0 - [2]) / [2]
    BoxElement lhs = box_mul(BoxElement::generator(2), BoxElement::generator(0));
    RatFun inv2 = RatFun::one() / qint(2);
    BoxElement rhs = BoxElement::generator(2).scaled(RatFun(brace(2)) * inv2) +
                     BoxElement::generator(0).scaled(inv2) -
                     BoxElement::constant(qint(2) * inv2).scaled(RatFun::one());
    CHECK(lhs == rhs);
}

TEST_CASE("descending products") {
    CHECK(box_desc_check(4, 0));
    CHECK(box_desc_check(3, 2));
    CHECK(box_desc_check(6, 6));
    CHECK(box_desc_check(5, 4));
}

TEST_CASE("box algebra is commutative and associative") {
    std::mt19937 rng(20260826);
    for (int trial = 0; trial < 12; ++trial) {
        BoxElement a = random_box(rng, 5, 2);
        BoxElement b = random_box(rng, 5, 2);
        BoxElement c = random_box(rng, 5, 2);
        CHECK(box_mul(a, b) == box_mul(b, a));
        CHECK(box_mul(box_mul(a, b), c) == box_mul(a, box_mul(b, c)));
    }
}

TEST_CASE("scalar representation") {
    CHECK(box_eval(BoxElement::generator(0), 0) == qint(1) / qint(2));
    // adjacent-index relation holds among the scalars
    for (int n = 0; n <= 4; ++n)
        for (int k = 0; k <= 3; ++k) {
            RatFun bk = box_eval(BoxElement::generator(k), n);
            RatFun bk1 = box_eval(BoxElement::generator(k - 1), n);
            CHECK(bk * bk1 == qint(2) * bk - RatFun::one());
        }
    // homomorphism on random pairs
    std::mt19937 rng(7);
    for (int n = 0; n <= 6; ++n)
        for (int trial = 0; trial < 6; ++trial) {
            BoxElement a = random_box(rng, 4, 2);
            BoxElement b = random_box(rng, 4, 2);
            CHECK(box_eval(box_mul(a, b), n) == box_eval(a, n) * box_eval(b, n));
        }
    // out-of-range index
    CHECK_THROWS_AS((void)box_eval(BoxElement::generator(-4), 1), std::domain_error);
    // inverted generators evaluate to inverse scalars
    RatFun v = box_eval(BoxElement::generator(1, -1), 2);
    CHECK(v == qint(5) / qint(4));
}

TEST_CASE("power series closed form") {
    CHECK(power_series_identity_check(1, 1));
    CHECK(power_series_identity_check(2, 0));
    CHECK(power_series_identity_check(3, 4));
    CHECK(power_series_identity_check(0, 2));
    CHECK(power_series_identity_check(5, 3));
}

TEST_CASE("idempotent algebra") {
    CElement c0 = CElement::generator(0);
    CElement c1 = CElement::generator(1);
    CHECK(c0 * c0 == c0);
    CHECK((c0 * c1).is_zero());
    CHECK(CElement::generator(-1).is_zero());
    CHECK(c0.eval(4, 0) == RatFun::one());
    CHECK(c0.eval(4, 1) == RatFun::zero());
    CHECK(CElement::generator(3).eval(4, 3) == RatFun::zero()); // block > n/2
}

TEST_CASE("independence harness") {
    std::vector<int> levels{0, 1, 2, 3, 4, 5};
    {
        std::vector<PsiElement> fam(3);
        fam[1].box = BoxElement::generator(0);
        fam[2].box = BoxElement::generator(0, 2);
        CHECK(independence_rank(fam, levels) == 3);
    }
    {
        std::vector<PsiElement> fam(3);
        fam[0].c = CElement::generator(0);
        fam[1].c = CElement::generator(1);
        fam[2].c = CElement::generator(2);
        CHECK(independence_rank(fam, {4, 5, 6}) == 3);
    }
    {
        // third element is b_1 b_0 reduced, dependent on {1, b_1}
        std::vector<PsiElement> fam(3);
        fam[1].box = BoxElement::generator(1);
        fam[2].box = box_mul(BoxElement::generator(1), BoxElement::generator(0));
        CHECK(independence_rank(fam, levels) == 2);
    }
}

namespace {
TLPlusToken tE(int i) { return {TLPlusToken::E, i, 0}; }
TLPlusToken tEp(int i) { return {TLPlusToken::Eprime, i, 0}; }
TLPlusToken tC(int k, int i) { return {TLPlusToken::C, i, k}; }
TLPlusToken tB(int k, int i) { return {TLPlusToken::B, i, k}; }
TLPlusToken tBinv(int k, int i) { return {TLPlusToken::Binv, i, k}; }
} // namespace

TEST_CASE("decorated strand normal forms") {
    // boxes move to standard position-0 form
    for (int s : {1, 2, 3})
        for (int i = 0; i <= s; ++i)
            for (int k = 0; k <= 2; ++k) {
                TLPlusElement nf = tlplus_normal_form(s, {tB(k, i)});
                REQUIRE(nf.terms().size() == 1);
                const auto &[key, c] = *nf.terms().begin();
                CHECK(key.boxes == BoxElement::Mono{{k + i, 1}});
                CHECK(key.bubbles.empty());
                CHECK(key.dia == TLDiagram::identity(s));
                CHECK(c == RatFun::one());
            }

    // bubble orthogonality and idempotence
    CHECK(tlplus_normal_form(2, {tC(0, 1), tC(1, 1)}).is_zero());
    CHECK(tlplus_normal_form(2, {tC(1, 1), tC(1, 1)}) ==
          tlplus_normal_form(2, {tC(1, 1)}));

    // bubble past the cup of a cup-cap: c_{k,i+1} e_i = c_{k-1,i-1} e_i
    for (int k : {1, 2, 3})
        CHECK(tlplus_normal_form(2, {tC(k, 2), tE(1)}) ==
              tlplus_normal_form(2, {tC(k - 1, 0), tE(1)}));
    // ... and the label-zero bubble annihilates across the cup
    CHECK(tlplus_normal_form(2, {tC(0, 2), tE(1)}).is_zero());

    // e_i' c_{k,i} e_i' = (c_{k-1,i-1} b_{-2k+1,i-1} + c_{k,i-1} b_{-2k,i-1}^{-1}) e_i'
    for (int s : {2, 3})
        for (int i = 1; i <= s - 1; ++i)
            for (int k = 1; k <= 2; ++k) {
                TLPlusElement lhs =
                    tlplus_normal_form(s, {tEp(i), tC(k, i), tEp(i)});
                TLPlusElement rhs =
                    tlplus_normal_form(
                        s, {tC(k - 1, i - 1), tB(-2 * k + 1, i - 1), tEp(i)}) +
                    tlplus_normal_form(
                        s, {tC(k, i - 1), tBinv(-2 * k, i - 1), tEp(i)});
                CHECK(lhs == rhs);
            }

    // the cup-cap squares correctly: e_i e_i = [2] e_i
    TLPlusElement e = tlplus_normal_form(2, {tE(1)});
    CHECK(tlplus_normal_form(2, {tE(1), tE(1)}) == e.scaled(qint(2)));

    // normal form is stable: re-applying a bubble already in place is a no-op
    TLPlusElement x = tlplus_normal_form(3, {tC(1, 2), tEp(1), tB(0, 1)});
    CHECK(tlplus_apply(tC(1, 2), x) == x);
}

TEST_CASE("diamond confluence of the critical overlaps") {
    DiamondReport rep = diamond_check(3, 2);
    for (const auto &inst : rep.instances) {
        CAPTURE(inst.ambiguity);
        CAPTURE(inst.s);
        CAPTURE(inst.i);
        CAPTURE(inst.k);
        CHECK(inst.pass);
    }
    CHECK(rep.pass);
    CHECK(!rep.instances.empty());
}

TEST_CASE("diagram evaluation agrees with the normal form") {
    CHECK(psi_s_consistency(2, {tE(1)}, {2, 3, 4}));
    CHECK(psi_s_consistency(1, {tB(0, 1)}, {1, 2, 3}));
    CHECK(psi_s_consistency(2, {tEp(1), tC(0, 1)}, {3, 4}));
    CHECK(psi_s_consistency(2, {tEp(1), tC(1, 1)}, {4, 5}));
    CHECK(psi_s_consistency(2, {tEp(1), tC(1, 1), tEp(1)}, {4, 5}));
    CHECK(psi_s_consistency(3, {tEp(2), tC(1, 2), tEp(1)}, {4}));
    CHECK(psi_s_consistency(3, {tE(1), tE(2), tE(1)}, {2, 3}));
}
