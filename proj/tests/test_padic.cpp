// Copyright 2026 The prig Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace prig;

namespace {

std::vector<mpz_class> ints(std::initializer_list<long> v)
{
    std::vector<mpz_class> r;
    for (long x : v)
        r.emplace_back(x);
    return r;
}

RingElement random_element(oracle::Rng& rng, const RingPtr& R)
{
    std::vector<mpz_class> c(R->degree());
    for (auto& x : c) {
        // Bias toward p-divisible coordinates so valuations vary.
        x = rng.below(R->modulus());
        for (unsigned k = rng.below(4); k > 0; --k)
            x *= R->prime();
    }
    return RingElement(R, c);
}

} // namespace

TEST(Rational, ArithmeticAndParse)
{
    EXPECT_EQ(Rational(2, 4), Rational(1, 2));
    EXPECT_EQ(Rational(1, 2) + Rational(1, 3), Rational(5, 6));
    EXPECT_EQ(Rational(-3, -6).str(), "1/2");
    EXPECT_EQ(Rational::parse("17/18"), Rational(17, 18));
    EXPECT_EQ(Rational::parse("3"), Rational(3));
    EXPECT_LT(Rational(1, 54), Rational(1, 18));
    EXPECT_THROW(Rational::parse("1/0"), Error);
    EXPECT_THROW(Rational::parse("x"), Error);
}

TEST(ValuationRat, DecisionsAndFormatting)
{
    auto half = ValuationRat::exact(Rational(1, 2));
    auto bound = ValuationRat::at_least(Rational(12));
    EXPECT_EQ(half.above(Rational(1, 3)), Decision::above);
    EXPECT_EQ(half.above(Rational(1, 2)), Decision::not_above);
    EXPECT_EQ(bound.above(Rational(10)), Decision::above);
    EXPECT_EQ(bound.above(Rational(12)), Decision::undecided);
    EXPECT_EQ(bound.str(), ">=12");
    EXPECT_EQ(ValuationRat::parse(">=17/18"), ValuationRat::at_least(Rational(17, 18)));
    EXPECT_EQ(min(half, bound), half);
    EXPECT_EQ(min(ValuationRat::exact(Rational(13)), bound), bound);
}

TEST(ValInt, Examples)
{
    EXPECT_EQ(val_int(PadicApprox(3, 6, 9)), ValuationRat::exact(Rational(2)));
    EXPECT_EQ(val_int(PadicApprox(3, 6, 0)), ValuationRat::at_least(Rational(6)));
    EXPECT_EQ(val_int(PadicApprox(5, 4, 50)), ValuationRat::exact(Rational(2)));
}

TEST(PadicApprox, PrecisionNeverIncreases)
{
    PadicApprox a(3, 6, 27), b(3, 4, 5);
    EXPECT_EQ((a + b).precision(), 4);
    EXPECT_EQ((a * b).precision(), 4);
    PadicApprox q = a.divide_by_p();
    EXPECT_EQ(q.precision(), 5);
    EXPECT_EQ(q.value(), 9);
    EXPECT_THROW(b.divide_by_p(), DomainError);
    EXPECT_EQ((b * b.inverse()).value(), 1);
    EXPECT_THROW(PadicApprox(3, 4, 3).inverse(), DomainError);
    EXPECT_EQ(PadicApprox(3, 4, -1).value(), 80);
    EXPECT_EQ(PadicApprox(3, 4, -1).symmetric_value(), -1);
}

TEST(Cyclotomic, MinpolyExamples)
{
    EXPECT_EQ(cyclotomic_minpoly(3, 1), ints({3, 3, 1}));
    EXPECT_EQ(cyclotomic_minpoly(2, 1), ints({2, 1}));
    EXPECT_EQ(cyclotomic_minpoly(3, 2), ints({3, 9, 18, 21, 15, 6, 1}));
}

TEST(Cyclotomic, MatchesOracleAndCompositionIdentity)
{
    for (std::uint32_t p : {2u, 3u, 5u})
        for (unsigned k = 1; k <= 3; ++k) {
            IntPoly phi = cyclotomic_minpoly(p, k);
            EXPECT_EQ(phi, oracle::cyclotomic(p, k)) << p << "^" << k;
            EXPECT_TRUE(is_eisenstein(p, phi));
            IntPoly lower = oracle::one_plus_x_pow(prime_power(p, k - 1).get_ui());
            lower[0] -= 1;
            IntPoly full = oracle::one_plus_x_pow(prime_power(p, k).get_ui());
            full[0] -= 1;
            EXPECT_EQ(poly_mul(phi, lower), full);
        }
}

TEST(EisensteinRing, RejectsNonEisenstein)
{
    EXPECT_THROW(EisensteinRing::make(3, ints({9, 3, 1}), 6, "bad"), DomainError);
    EXPECT_THROW(EisensteinRing::make(3, ints({3, 1, 1}), 6, "bad"), DomainError);
    EXPECT_THROW(EisensteinRing::make(3, ints({3, 3, 2}), 6, "bad"), DomainError);
    EXPECT_NO_THROW(EisensteinRing::make(3, ints({3, 0, 1}), 6, "ok"));
}

TEST(RingElement, AdditiveIdentityAndUniformizerPower)
{
    auto R = EisensteinRing::cyclotomic(3, 2, 8);
    oracle::Rng rng(11);
    RingElement a = random_element(rng, R);
    EXPECT_EQ(a + RingElement(R), a);

    RingElement pi = RingElement::uniformizer(R);
    RingElement pe = pi.pow(R->degree());
    std::vector<mpz_class> expect(R->degree());
    for (unsigned i = 0; i < R->degree(); ++i)
        expect[i] = -R->minpoly()[i];
    EXPECT_EQ(pe, RingElement(R, expect));
}

TEST(RingElement, ProductMatchesSchoolbookOracle)
{
    auto R = EisensteinRing::cyclotomic(3, 2, 12);
    RingElement lam = RingElement::uniformizer(R);
    RingElement lam5 = lam.pow(5);
    std::vector<mpz_class> x(R->degree()), x5(R->degree());
    x[1] = 1;
    x5[5] = 1;
    EXPECT_EQ((lam * lam5).coeffs(), oracle::ring_mul(x, x5, R->minpoly(), R->modulus()));

    oracle::Rng rng(5);
    for (int t = 0; t < 50; ++t) {
        auto S = EisensteinRing::cyclotomic(t % 2 ? 2 : 3, 1 + t % 3, 10);
        RingElement a = random_element(rng, S), b = random_element(rng, S);
        EXPECT_EQ((a * b).coeffs(), oracle::ring_mul(a.coeffs(), b.coeffs(), S->minpoly(), S->modulus()));
    }
}

TEST(ElementValuation, Examples)
{
    auto R1 = EisensteinRing::cyclotomic(3, 1, 12);
    EXPECT_EQ(element_valuation(RingElement::uniformizer(R1)), ValuationRat::exact(Rational(1, 2)));
    EXPECT_EQ(element_valuation(RingElement::from_integer(R1, 3)), ValuationRat::exact(Rational(1)));
    auto R4 = EisensteinRing::cyclotomic(3, 4, 12);
    EXPECT_EQ(element_valuation(RingElement::uniformizer(R4)), ValuationRat::exact(Rational(1, 54)));
    EXPECT_EQ(element_valuation(RingElement(R4)), ValuationRat::at_least(Rational(12)));
    // A coefficient at the precision edge only yields a bound.
    auto B = EisensteinRing::base(3, 4);
    EXPECT_EQ(element_valuation(RingElement::from_integer(B, 81)), ValuationRat::at_least(Rational(4)));
}

TEST(ElementValuation, CeilingCapsTheCertificate)
{
    auto R = EisensteinRing::cyclotomic(3, 2, 12);
    RingElement x = RingElement::from_integer(R, 3).with_ceiling(Rational(1, 2));
    EXPECT_EQ(element_valuation(x), ValuationRat::at_least(Rational(1, 2)));
    RingElement y = RingElement::uniformizer(R).with_ceiling(Rational(1, 2));
    EXPECT_EQ(element_valuation(y), ValuationRat::exact(Rational(1, 6)));
}

TEST(ElementValuation, PropertyMultiplicativeAndUltrametric)
{
    oracle::Rng rng(2026);
    int multiplicative = 0, ultrametric = 0;
    for (int t = 0; t < 300; ++t) {
        const std::uint32_t p = t % 2 ? 2 : 3;
        auto R = EisensteinRing::cyclotomic(p, 1 + t % 3, 16);
        RingElement a = random_element(rng, R), b = random_element(rng, R);
        ValuationRat va = element_valuation(a), vb = element_valuation(b);
        ValuationRat vab = element_valuation(a * b);
        if (va.is_exact() && vb.is_exact() && va.value() + vb.value() < Rational(16)) {
            ASSERT_TRUE(vab.is_exact());
            EXPECT_EQ(vab.value(), va.value() + vb.value());
            ++multiplicative;
        }
        ValuationRat vs = element_valuation(a + b);
        ValuationRat m = min(va, vb);
        EXPECT_NE(vs.at_least_as(m.value()), Decision::not_above);
        if (va.is_exact() && vb.is_exact() && va.value() != vb.value()) {
            EXPECT_EQ(vs, m);
            ++ultrametric;
        }
    }
    EXPECT_GT(multiplicative, 100);
    EXPECT_GT(ultrametric, 50);
}

TEST(RingElement, RepeatedProductsStayExact)
{
    // M multiplications at precision N agree with the oracle done at high
    // precision and then reduced.
    auto R = EisensteinRing::cyclotomic(2, 3, 10);
    auto Rbig = EisensteinRing::cyclotomic(2, 3, 40);
    oracle::Rng rng(3);
    RingElement a = random_element(rng, R);
    std::vector<mpz_class> acc(R->degree());
    acc[0] = 1;
    RingElement prod = RingElement::one(R);
    for (int i = 0; i < 25; ++i) {
        prod = prod * a;
        acc = oracle::ring_mul(acc, a.coeffs(), R->minpoly(), Rbig->modulus());
    }
    for (auto& c : acc)
        c %= R->modulus();
    EXPECT_EQ(prod.coeffs(), acc);
}

TEST(RingElement, MismatchedRingsThrow)
{
    auto R = EisensteinRing::cyclotomic(3, 1, 8);
    auto S = EisensteinRing::cyclotomic(3, 2, 8);
    EXPECT_THROW(RingElement::one(R) + RingElement::one(S), MismatchError);
    EXPECT_EQ(RingElement::from_integer(EisensteinRing::base(3, 8), 5).lift_to(S), RingElement::from_integer(S, 5));
}
