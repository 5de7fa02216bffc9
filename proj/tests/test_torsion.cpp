// Copyright 2026 The prig Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "oracles.hpp"

using namespace prig;

namespace {

TorsionPoint pt(unsigned level, long u)
{
    return {level, u};
}

bool agree_to_ceiling(const RingElement& a, const RingElement& b)
{
    Rational c = min(a.ceiling(), b.ceiling());
    return element_valuation((a - b).with_ceiling(c)).is_lower_bound();
}

MultiSeries random_poly(oracle::Rng& rng, std::uint32_t p, int N, unsigned nvars, unsigned D, unsigned terms,
                        unsigned max_degree)
{
    auto R = EisensteinRing::base(p, N);
    MultiSeries s(R, nvars, D, true);
    for (unsigned t = 0; t < terms; ++t) {
        std::vector<unsigned> e(nvars);
        unsigned budget = static_cast<unsigned>(rng.below(std::min(D, max_degree) + 1));
        for (unsigned i = 0; i < nvars && budget > 0; ++i) {
            e[i] = static_cast<unsigned>(rng.below(budget + 1));
            budget -= e[i];
        }
        s.add_term(make_monomial(e), RingElement::from_integer(R, rng.below(R->modulus())));
    }
    return s;
}

TorsionTuple random_tuple(oracle::Rng& rng, std::uint32_t p, unsigned K, unsigned n)
{
    TorsionTuple t;
    for (unsigned i = 0; i < n; ++i) {
        unsigned k = static_cast<unsigned>(rng.below(K + 1));
        t.push_back(TorsionPoint::from_fraction(p, k, rng.below(prime_power(p, k))));
    }
    return t;
}

std::set<TorsionTuple> zero_set(const ScanReport& r)
{
    std::set<TorsionTuple> s;
    for (const auto& e : r.entries)
        if (e.is_zero())
            s.insert(e.tuple);
    return s;
}

} // namespace

TEST(TorsionPoint, ArithmeticAndNotation)
{
    EXPECT_EQ(TorsionPoint::from_fraction(3, 2, 3), pt(1, 1));
    EXPECT_EQ(TorsionPoint::from_fraction(3, 2, 9), TorsionPoint::origin());
    EXPECT_EQ(TorsionPoint::from_fraction(3, 2, -1), pt(2, 8));
    EXPECT_EQ(torsion_add(3, pt(2, 1), pt(1, 2)), pt(2, 7));
    EXPECT_EQ(torsion_add(3, pt(2, 4), pt(2, 5)), pt(0, 0));
    EXPECT_EQ(torsion_neg(3, pt(2, 4)), pt(2, 5));
    EXPECT_EQ(torsion_scale(3, pt(2, 2), 3), pt(1, 2));
    EXPECT_EQ(parse_tuple(3, "2:4,1:1"), (TorsionTuple{pt(2, 4), pt(1, 1)}));
    EXPECT_EQ(tuple_str({pt(2, 4), TorsionPoint::origin()}), "2:4,0:0");
    EXPECT_EQ(tuple_level({pt(1, 1), pt(3, 2)}), 3u);
    EXPECT_THROW(TorsionPoint::parse(3, "2:3"), Error);
    EXPECT_THROW(TorsionPoint::parse(3, "2:9"), Error);
    EXPECT_THROW(TorsionPoint::parse(3, "x"), Error);
}

TEST(Enumerate, CountsAndDeterminism)
{
    auto one = enumerate_torsion(3, 1, 1, EnumerationMode::all());
    EXPECT_EQ(one, (std::vector<TorsionTuple>{{pt(0, 0)}, {pt(1, 1)}, {pt(1, 2)}}));
    auto pairs = enumerate_torsion(2, 2, 2, EnumerationMode::all());
    EXPECT_EQ(pairs.size(), 16u);
    EXPECT_EQ(std::set<TorsionTuple>(pairs.begin(), pairs.end()).size(), 16u);
    EXPECT_EQ(enumerate_torsion(3, 4, 2, EnumerationMode::all()).size(), 6561u);

    auto a = enumerate_torsion(3, 3, 3, EnumerationMode::sample(5, 1));
    auto b = enumerate_torsion(3, 3, 3, EnumerationMode::sample(5, 1));
    EXPECT_EQ(a.size(), 5u);
    EXPECT_EQ(a, b);
    EXPECT_NE(a, enumerate_torsion(3, 3, 3, EnumerationMode::sample(5, 2)));
    for (const auto& t : a)
        EXPECT_LE(tuple_level(t), 3u);

    // Past the cap, exhaustive mode falls back to seeded sampling.
    auto capped = enumerate_torsion(3, 4, 3, EnumerationMode::all(1000, 9));
    EXPECT_EQ(capped.size(), 1000u);
    EXPECT_EQ(capped, enumerate_torsion(3, 4, 3, EnumerationMode::sample(1000, 9)));
}

TEST(Embed, MultiplicativeExamples)
{
    auto G = TorsionGroup::multiplicative(3, 12, 16);
    RingPtr R2 = G->ring(2);
    RingElement one = RingElement::one(R2), lam = RingElement::uniformizer(R2);
    RingElement z3 = G->embed(pt(1, 1), 2);
    EXPECT_EQ(z3, (one + lam).pow(3) - one);
    // Phi_3(1 + X) = X^2 + 3X + 3 annihilates zeta_3 - 1.
    EXPECT_TRUE((z3 * z3 + z3.scaled(3) + RingElement::from_integer(R2, 3)).is_zero());
    EXPECT_TRUE(G->embed(TorsionPoint::origin(), 2).is_zero());
    EXPECT_EQ(G->embed(pt(2, 1), 2), lam);
    EXPECT_EQ(G->embed(pt(2, 5), 2), (one + lam).pow(5) - one);
    EXPECT_THROW(G->embed(pt(3, 1), 2), DomainError);
}

TEST(Embed, LubinTateLevelsAreCompatible)
{
    auto G = TorsionGroup::lubin_tate(LTGroup::build(LTParams::standard(3), 16, 12));
    for (unsigned K = 1; K <= 3; ++K)
        for (unsigned k = 1; k <= K; ++k) {
            const std::int64_t e = prime_power(3, k).get_si() - prime_power(3, k - 1).get_si();
            RingElement x = G->embed(pt(k, 2), K);
            EXPECT_EQ(element_valuation(x), ValuationRat::exact(Rational(1, e)));
            // Roots of X^2 + 3 at level 1.
            if (k == 1) {
                RingElement r = x * x + RingElement::from_integer(x.ring(), 3);
                EXPECT_TRUE(element_valuation(r.with_ceiling(x.ceiling())).is_lower_bound());
            }
        }
}

TEST(Scan, CoordinateHyperplane)
{
    auto G = TorsionGroup::multiplicative(3, 12, 16);
    std::vector<MultiSeries> I{oracle::series(3, 12, 2, 16, {{{1, 0}, 1}})};
    ScanReport r = scan(G, I, {2, {Rational(10)}, EnumerationMode::all(), 2});
    ASSERT_EQ(r.entries.size(), 81u);
    ASSERT_EQ(r.sets.size(), 1u);
    EXPECT_EQ(r.sets[0].members.size(), 9u);
    EXPECT_TRUE(r.sets[0].undecided.empty());
    for (std::size_t i : r.sets[0].members)
        EXPECT_TRUE(r.entries[i].tuple[0].is_origin());
}

TEST(Scan, LinearProfile)
{
    auto G = TorsionGroup::multiplicative(3, 12, 16);
    std::vector<MultiSeries> I{oracle::series(3, 12, 1, 16, {{{1}, 1}, {{0}, -3}})};
    ScanReport r = scan(G, I, {3, {}, EnumerationMode::all(), 0});
    ASSERT_EQ(r.entries.size(), 27u);
    ASSERT_EQ(r.profile.size(), 4u);
    EXPECT_EQ(r.profile[0].max_value, Rational(1));
    EXPECT_EQ(r.profile[1].max_value, Rational(1, 2));
    EXPECT_EQ(r.profile[2].max_value, Rational(1, 6));
    EXPECT_EQ(r.profile[3].max_value, Rational(1, 18));
    EXPECT_EQ(r.profile[1].argmax.size(), 2u);
    EXPECT_EQ(r.undecided_count(), 0u);
    EXPECT_EQ(r.zero_count(3), 0u);
}

TEST(Scan, BinomialZeros)
{
    auto G = TorsionGroup::multiplicative(3, 12, 16);
    std::vector<MultiSeries> I{oracle::binomial_relation(3, 12, 16, 3)};
    ScanReport r = scan(G, I, {2, {}, EnumerationMode::all(), 0});
    std::set<TorsionTuple> want;
    for (const auto& t : enumerate_torsion(3, 2, 1, EnumerationMode::all()))
        want.insert({t[0], torsion_scale(3, t[0], 3)});
    EXPECT_EQ(want.size(), 9u);
    EXPECT_EQ(zero_set(r), want);
    EXPECT_EQ(r.undecided_count(), 0u);
}

TEST(Scan, CapFallsBackToSampling)
{
    auto G = TorsionGroup::multiplicative(3, 12, 16);
    std::vector<MultiSeries> I{oracle::binomial_relation(3, 12, 16, 2)};
    ScanReport full = scan(G, I, {2, {}, EnumerationMode::all(), 0});
    EXPECT_TRUE(full.exhaustive);
    ScanReport capped = scan(G, I, {2, {}, EnumerationMode::all(20, 3), 0});
    EXPECT_FALSE(capped.exhaustive);
    EXPECT_EQ(capped.entries.size(), 20u);
    ScanReport covering = scan(G, I, {1, {}, EnumerationMode::sample(50, 3), 0});
    EXPECT_TRUE(covering.exhaustive);
}

TEST(Scan, PropertyOracleZeroSet)
{
    oracle::Rng rng(55);
    auto G = TorsionGroup::multiplicative(3, 12, 16);
    for (int t = 0; t < 6; ++t) {
        const std::uint64_t m = 1 + rng.below(30);
        std::vector<MultiSeries> I{oracle::binomial_relation(3, 12, 16, m)};
        ScanReport r = scan(G, I, {2, {}, EnumerationMode::all(), 0});
        std::set<TorsionTuple> want;
        for (const auto& x : enumerate_torsion(3, 2, 1, EnumerationMode::all()))
            want.insert({x[0], torsion_scale(3, x[0], m)});
        EXPECT_EQ(zero_set(r), want) << "m=" << m;
        EXPECT_EQ(r.undecided_count(), 0u) << "m=" << m;
    }
}

TEST(Scan, PropertyMonotoneAndThreadIndependent)
{
    oracle::Rng rng(77);
    auto G = TorsionGroup::multiplicative(2, 12, 16);
    for (int t = 0; t < 5; ++t) {
        std::vector<MultiSeries> I{random_poly(rng, 2, 12, 2, 6, 5, 6), random_poly(rng, 2, 12, 2, 6, 5, 6)};
        std::vector<Rational> thr{Rational(1, 8), Rational(1, 4), Rational(1, 2), Rational(1), Rational(3)};
        ScanReport a = scan(G, I, {3, thr, EnumerationMode::all(), 1});
        ScanReport b = scan(G, I, {3, thr, EnumerationMode::all(), 4});
        ASSERT_EQ(a.entries.size(), b.entries.size());
        for (std::size_t i = 0; i < a.entries.size(); ++i) {
            EXPECT_EQ(a.entries[i].tuple, b.entries[i].tuple);
            EXPECT_EQ(a.entries[i].values, b.entries[i].values);
        }
        for (std::size_t s = 1; s < thr.size(); ++s) {
            const auto& lo = a.sets[s - 1].members;
            for (std::size_t i : a.sets[s].members)
                EXPECT_TRUE(std::binary_search(lo.begin(), lo.end(), i));
        }
    }
}

TEST(Action, Examples)
{
    const std::uint32_t p = 3;
    TorsionTuple t{pt(2, 2), pt(2, 7)};
    EXPECT_EQ(action_on_torsion(p, ChangeOfVariables(2u), t), t);

    // (zeta, zeta^m) with B_21 = -m lands on the axis.
    const long m = 5;
    TorsionTuple s{pt(2, 1), pt(2, m)};
    ChangeOfVariables cv(2u);
    cv.set_entry(1, 0, PadicApprox(p, 2, -m));
    EXPECT_EQ(action_on_torsion(p, cv, s), (TorsionTuple{pt(2, 1), TorsionPoint::origin()}));
    EXPECT_EQ(action_on_torsion(p, cv.inverse(), action_on_torsion(p, cv, t)), t);

    ChangeOfVariables shallow(2u);
    shallow.set_entry(1, 0, PadicApprox(p, 1, 1));
    EXPECT_THROW(action_on_torsion(p, shallow, t), PrecisionError);
}

TEST(Action, PropertyBijective)
{
    oracle::Rng rng(5);
    for (int i = 0; i < 50; ++i) {
        const std::uint32_t p = i % 2 ? 2 : 3;
        ChangeOfVariables cv(3u);
        for (unsigned a = 1; a < 3; ++a)
            for (unsigned b = 0; b < a; ++b)
                cv.set_entry(a, b, PadicApprox(p, 4, rng.below(prime_power(p, 4))));
        TorsionTuple t = random_tuple(rng, p, 4, 3);
        EXPECT_EQ(action_on_torsion(p, cv.inverse(), action_on_torsion(p, cv, t)), t);
    }
}

TEST(Action, PropertyEquivariantEvaluation)
{
    // (phi o cv)(t) = phi(cv . t) in the level-K ring.
    oracle::Rng rng(2718);
    for (int i = 0; i < 12; ++i) {
        const std::uint32_t p = i % 2 ? 2 : 3;
        const unsigned D = 16, K = p == 2 ? 3 : 2;
        auto G = TorsionGroup::multiplicative(p, 12, D);
        const int M = binomial_exponent_precision(p, 12, D);
        MultiSeries phi = random_poly(rng, p, 12, 2, D, 5, 4);
        ChangeOfVariables cv(rng.coin() ? std::vector<unsigned>{0, 1} : std::vector<unsigned>{1, 0});
        cv.set_entry(1, 0, PadicApprox(p, M, rng.below(prime_power(p, M))));
        TorsionTuple t = random_tuple(rng, p, K, 2);
        RingElement lhs = evaluate(G->change_of_vars(phi, cv), G->embed(t, K));
        RingElement rhs = evaluate(phi, G->embed(action_on_torsion(p, cv, t), K));
        EXPECT_TRUE(agree_to_ceiling(lhs, rhs)) << tuple_str(t);
    }
}

TEST(Action, EquivariantScanLubinTate)
{
    auto LT = LTGroup::build(LTParams::standard(3), 16, 12);
    auto G = TorsionGroup::lubin_tate(LT);
    const int W = lt_working_precision(12, 16);
    MultiSeries phi = oracle::series(3, 12, 2, 16, {{{1, 0}, 1}, {{0, 1}, 2}, {{1, 1}, 1}});
    ChangeOfVariables cv(2u);
    cv.set_entry(1, 0, PadicApprox(3, W, 4));
    std::vector<MultiSeries> I{phi}, J{G->change_of_vars(phi, cv)};
    ScanReport a = scan(G, J, {2, {}, EnumerationMode::all(), 0});
    ScanReport b = scan(G, I, {2, {}, EnumerationMode::all(), 0});
    std::map<TorsionTuple, std::vector<ValuationRat>> by_tuple;
    for (const auto& e : b.entries)
        by_tuple.emplace(e.tuple, e.values);
    for (const auto& e : a.entries) {
        const auto& want = by_tuple.at(action_on_torsion(3, cv, e.tuple));
        ASSERT_EQ(e.values.size(), want.size());
        for (std::size_t g = 0; g < want.size(); ++g) {
            if (want[g].is_exact() && e.values[g].is_exact())
                EXPECT_EQ(e.values[g], want[g]) << tuple_str(e.tuple);
            else
                EXPECT_EQ(e.values[g].is_exact(), want[g].is_exact()) << tuple_str(e.tuple);
        }
    }
}

TEST(Frobenius, Examples)
{
    auto G = TorsionGroup::multiplicative(3, 12, 16);
    MultiSeries X = oracle::series(3, 12, 1, 16, {{{1}, 1}});
    FrobeniusCheck c = frobenius_congruence_check(G, X, {pt(2, 1)}, 2);
    EXPECT_EQ(c.bound, Rational(1));
    EXPECT_EQ(c.holds, Decision::above);

    MultiSeries five = oracle::series(3, 12, 1, 16, {{{0}, 5}});
    EXPECT_EQ(frobenius_congruence_check(G, five, {pt(1, 1)}, 2).holds, Decision::above);

    MultiSeries sum = oracle::series(3, 12, 2, 16, {{{1, 0}, 1}, {{0, 1}, 1}});
    EXPECT_EQ(frobenius_congruence_check(G, sum, {pt(1, 1), pt(2, 1)}, 2).holds, Decision::above);
}

TEST(Frobenius, PropertyCongruence)
{
    oracle::Rng rng(1001);
    int undecided = 0, total = 0;
    for (int i = 0; i < 120; ++i) {
        const std::uint32_t p = i % 2 ? 2 : 3;
        const unsigned K = 1 + static_cast<unsigned>(rng.below(3));
        const unsigned n = 1 + static_cast<unsigned>(rng.below(2));
        auto G = TorsionGroup::multiplicative(p, 12, 16);
        MultiSeries phi = random_poly(rng, p, 12, n, 16, 4, 5);
        FrobeniusCheck c = frobenius_congruence_check(G, phi, random_tuple(rng, p, K, n), K);
        EXPECT_NE(c.holds, Decision::not_above) << c.difference.str();
        undecided += c.holds == Decision::undecided;
        ++total;
    }
    EXPECT_EQ(undecided, 0);
    EXPECT_EQ(total, 120);
}
