// Copyright 2026 The prig Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "prig/json_io.hpp"

using namespace prig;

TEST(JsonSeries, RoundTripBaseRing)
{
    MultiSeries s = oracle::series(3, 12, 2, 16, {{{1, 0}, 1}, {{0, 1}, -1}, {{3, 2}, 123456}});
    json j = series_to_json(s);
    EXPECT_EQ(j["coeff_ring"], "Zp");
    EXPECT_EQ(j["vars"], 2);
    MultiSeries back = series_from_json(json::parse(j.dump()));
    EXPECT_EQ(back, s);
    EXPECT_EQ(back.is_polynomial(), s.is_polynomial());
    EXPECT_EQ(series_to_json(back).dump(), j.dump());
}

TEST(JsonSeries, RoundTripExtensionRing)
{
    auto R = EisensteinRing::cyclotomic(3, 2, 8);
    MultiSeries s(R, 1, 6);
    s.add_term(make_monomial(std::vector<unsigned>{1}), RingElement::uniformizer(R).pow(4));
    s.add_term(make_monomial(std::vector<unsigned>{3}), RingElement::from_integer(R, 7));
    MultiSeries back = series_from_json(series_to_json(s));
    EXPECT_EQ(back, s);
    EXPECT_TRUE(same_ring(back.ring(), R));
}

TEST(JsonSeries, PropertyRandomRoundTrip)
{
    oracle::Rng rng(64);
    for (int t = 0; t < 40; ++t) {
        const std::uint32_t p = t % 2 ? 2 : 3;
        const unsigned n = 1 + static_cast<unsigned>(rng.below(3));
        auto R = EisensteinRing::base(p, 12);
        MultiSeries s(R, n, 10, rng.coin());
        for (int k = 0; k < 6; ++k) {
            std::vector<unsigned> e(n);
            e[rng.below(n)] = static_cast<unsigned>(rng.below(11));
            s.add_term(make_monomial(e), RingElement::from_integer(R, rng.below(R->modulus())));
        }
        EXPECT_EQ(series_from_json(json::parse(series_to_json(s).dump())), s);
    }
}

TEST(JsonSeries, AcceptsIntegerCoefficientsAndNegatives)
{
    json j = json::parse(R"({"p":3,"precision":4,"degree_bound":3,"vars":1,"coeff_ring":"Zp",
                             "terms":[{"exp":[1],"coeff":-1},{"exp":[2],"coeff":"82"}]})");
    MultiSeries s = series_from_json(j);
    EXPECT_EQ(s, oracle::series(3, 4, 1, 3, {{{1}, 80}, {{2}, 1}}));
}

TEST(JsonSeries, RejectsMalformedInput)
{
    auto bad = [](const char* text) { return series_from_json(json::parse(text)); };
    EXPECT_THROW(bad(R"({"p":3})"), ParseError);
    EXPECT_THROW(bad(R"({"p":3,"precision":4,"degree_bound":3,"vars":2,"coeff_ring":"Zp",
                        "terms":[{"exp":[1],"coeff":"1"}]})"),
                 ParseError);
    EXPECT_THROW(bad(R"({"p":3,"precision":4,"degree_bound":3,"vars":1,"coeff_ring":"Zp",
                        "terms":[{"exp":[4],"coeff":"1"}]})"),
                 ParseError);
    EXPECT_THROW(bad(R"({"p":3,"precision":4,"degree_bound":3,"vars":1,"coeff_ring":"Zp",
                        "terms":[{"exp":[1],"coeff":"x1"}]})"),
                 Error);
    EXPECT_THROW(bad(R"({"p":4,"precision":4,"degree_bound":3,"vars":1,"coeff_ring":"Zp","terms":[]})"), Error);
}

TEST(JsonPadic, RoundTrip)
{
    PadicApprox a(3, 5, 200);
    json j = padic_to_json(a);
    EXPECT_EQ(j["value"], "200");
    EXPECT_EQ(j["modulus_exp"], 5);
    EXPECT_EQ(padic_from_json(j, 3), a);
    EXPECT_THROW(padic_from_json(json::parse(R"({"value":"1"})"), 3), ParseError);
}

TEST(JsonRing, Descriptors)
{
    EXPECT_TRUE(ring_from_json("Zp", 3, 8)->is_base());
    RingPtr c = ring_from_json("cyclotomic:2", 3, 8);
    EXPECT_EQ(c->minpoly(), cyclotomic_minpoly(3, 2));
    RingPtr back = ring_from_json(ring_to_json(*c), 3, 8);
    EXPECT_TRUE(same_ring(back, c));
    EXPECT_THROW(ring_from_json("cyclotomic:x", 3, 8), Error);
}

TEST(JsonLTParams, RoundTrip)
{
    EXPECT_EQ(lt_params_from_json(json::parse(R"({"p":3,"f":"standard"})")).kind(), LTKind::standard);
    EXPECT_EQ(lt_params_from_json(json::parse(R"({"p":2,"f":"cyclotomic"})")).kind(), LTKind::cyclotomic);
    LTParams custom = LTParams::custom(oracle::series(3, 30, 1, 8, {{{1}, 3}, {{2}, 9}, {{3}, 1}}));
    LTParams back = lt_params_from_json(lt_params_to_json(custom));
    EXPECT_EQ(back.kind(), LTKind::custom);
    EXPECT_EQ(back.f(8, 12), custom.f(8, 12));
    EXPECT_THROW(lt_params_from_json(json::parse(R"({"p":3,"f":"other"})")), Error);
}

TEST(JsonChangeOfVars, RoundTrip)
{
    ChangeOfVariables cv(std::vector<unsigned>{2, 0, 1});
    cv.set_entry(1, 0, PadicApprox(3, 6, 17));
    cv.set_entry(2, 1, PadicApprox(3, 4, 80));
    ChangeOfVariables back = change_of_vars_from_json(change_of_vars_to_json(cv), 3);
    EXPECT_EQ(back.permutation(), cv.permutation());
    EXPECT_EQ(back.entry(1, 0), cv.entry(1, 0));
    EXPECT_EQ(back.entry(2, 1), cv.entry(2, 1));
    EXPECT_FALSE(back.entry(2, 0).has_value());
    EXPECT_THROW(change_of_vars_from_json(json::parse(R"({"permutation":[0,0],"entries":[]})"), 3), Error);
    EXPECT_THROW(change_of_vars_from_json(json::parse(R"({"permutation":[0,1],"entries":[{"i":0,"j":1,
                                              "value":"1","modulus_exp":3}]})"),
                                          3),
                 Error);
}

TEST(JsonReports, DichotomyShape)
{
    auto G = TorsionGroup::multiplicative(3, 12, 16);
    std::vector<MultiSeries> I{oracle::series(3, 12, 1, 16, {{{1}, 1}, {{0}, -3}})};
    json j = dichotomy_report_to_json(dichotomy_report(G, I, {2, EnumerationMode::all(), 0}));
    EXPECT_EQ(j["outcome"], "bounded-below");
    EXPECT_EQ(j["constant"], "1/2");
    EXPECT_EQ(j["exceptions"], json::array({"0:0"}));
    EXPECT_EQ(j["profile"][1]["max"], "1/2");

    std::vector<MultiSeries> B{oracle::binomial_relation(3, 12, 16, 5)};
    json w = dichotomy_report_to_json(dichotomy_report(G, B, {2, EnumerationMode::all(), 0}));
    EXPECT_EQ(w["outcome"], "special-found");
    EXPECT_EQ(w["witness"]["kind"], "binomial-relation");
    EXPECT_EQ(w["witness"]["exponents"][1]["value"], "5");
    EXPECT_EQ(w["witness"]["exponents"][1]["modulus_exp"], 2);
    EXPECT_FALSE(w.contains("constant"));
}

TEST(JsonReports, ScanIsDeterministic)
{
    auto G = TorsionGroup::multiplicative(2, 12, 16);
    std::vector<MultiSeries> I{oracle::series(2, 12, 2, 16, {{{1, 0}, 1}, {{0, 1}, 2}})};
    ScanOptions a{3, {Rational(1, 2)}, EnumerationMode::all(), 1};
    ScanOptions b{3, {Rational(1, 2)}, EnumerationMode::all(), 3};
    EXPECT_EQ(scan_report_to_json(scan(G, I, a)).dump(), scan_report_to_json(scan(G, I, b)).dump());
    json j = scan_report_to_json(scan(G, I, a), false);
    EXPECT_FALSE(j.contains("entries"));
    EXPECT_EQ(j["tuples"], 64);
}

TEST(JsonReports, AxiomNames)
{
    json j = axiom_report_to_json(verify_axioms(LTParams::cyclotomic(3), 8, 6, 2, 0));
    EXPECT_EQ(j["all_pass"], true);
    ASSERT_EQ(j["axioms"].size(), 4u);
    EXPECT_EQ(j["axioms"][0]["name"], "equivariance");
    EXPECT_EQ(j["axioms"][3]["name"], "normalization");
}
