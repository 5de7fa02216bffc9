// Copyright 2026 The prig Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>
#include <json.hpp>

#include <memory>
#include <string>

#include "prig/prig.h"

using json = nlohmann::ordered_json;

namespace {

struct ContextDeleter {
    void operator()(prig_context* c) const { prig_context_free(c); }
};
using Context = std::unique_ptr<prig_context, ContextDeleter>;

Context make(const json& config)
{
    prig_status st = PRIG_E_INTERNAL;
    Context c(prig_context_new(config.dump().c_str(), &st));
    EXPECT_EQ(st, PRIG_OK) << prig_last_error(nullptr);
    return c;
}

// Takes ownership of a returned report.
json take(char* s)
{
    if (!s)
        return json();
    json j = json::parse(s);
    prig_string_free(s);
    return j;
}

const char* kBinomial5 = R"({"p":3,"precision":12,"degree_bound":16,"vars":2,"coeff_ring":"Zp","polynomial":true,
  "terms":[{"exp":[1,0],"coeff":"5"},{"exp":[2,0],"coeff":"10"},{"exp":[3,0],"coeff":"10"},
           {"exp":[4,0],"coeff":"5"},{"exp":[5,0],"coeff":"1"},{"exp":[0,1],"coeff":"-1"}]})";

const char* kLinear = R"({"p":3,"precision":12,"degree_bound":16,"vars":1,"coeff_ring":"Zp","polynomial":true,
  "terms":[{"exp":[0],"coeff":"-3"},{"exp":[1],"coeff":"1"}]})";

} // namespace

TEST(CApi, ContextErrors)
{
    prig_status st = PRIG_OK;
    EXPECT_EQ(prig_context_new("{not json", &st), nullptr);
    EXPECT_EQ(st, PRIG_E_INPUT);
    EXPECT_STRNE(prig_last_error(nullptr), "");
    EXPECT_EQ(prig_context_new(R"({"p":4})", &st), nullptr);
    EXPECT_EQ(st, PRIG_E_INPUT);
    EXPECT_EQ(prig_context_new(R"({"group":"nonsense"})", &st), nullptr);
    EXPECT_EQ(st, PRIG_E_INPUT);
    EXPECT_STREQ(prig_version(), "0.1.0");
    char* out = nullptr;
    EXPECT_EQ(prig_detect(nullptr, kLinear, &out), PRIG_E_INPUT);
}

TEST(CApi, LtBuildCyclotomic)
{
    Context c = make({{"p", 3}, {"group", "cyclotomic"}});
    char* out = nullptr;
    ASSERT_EQ(prig_lt_build(c.get(), R"(["1", "0", 2])", &out), PRIG_OK) << prig_last_error(c.get());
    json j = take(out);
    ASSERT_EQ(j["law"]["terms"].size(), 3u);
    ASSERT_EQ(j["brackets"].size(), 3u);
    EXPECT_EQ(j["brackets"][0]["series"]["terms"], json::parse(R"([{"exp":[1],"coeff":"1"}])"));
    EXPECT_TRUE(j["brackets"][1]["series"]["terms"].empty());
    EXPECT_EQ(prig_lt_build(c.get(), R"(["x"])", &out), PRIG_E_INPUT);
    EXPECT_NE(std::string(prig_last_error(c.get())).find("x"), std::string::npos);
}

TEST(CApi, VerifyAxioms)
{
    Context c = make({{"p", 2}, {"precision", 8}, {"degree_bound", 10}, {"group", "standard"}});
    char* out = nullptr;
    EXPECT_EQ(prig_verify_axioms(c.get(), 4, &out), PRIG_OK);
    EXPECT_EQ(take(out)["all_pass"], true);

    prig_status st = PRIG_OK;
    json bad = {{"p", 3},
                {"group", {{"p", 3}, {"f", json::parse(R"({"p":3,"precision":12,"degree_bound":16,"vars":1,
                    "coeff_ring":"Zp","terms":[{"exp":[2],"coeff":"1"}]})")}}}};
    Context b(prig_context_new(bad.dump().c_str(), &st));
    if (b) {
        EXPECT_EQ(prig_verify_axioms(b.get(), 4, &out), PRIG_E_INPUT);
    } else {
        EXPECT_EQ(st, PRIG_E_INPUT);
    }
}

TEST(CApi, ScanAndProfile)
{
    Context c = make({{"p", 3}, {"level", 3}});
    char* out = nullptr;
    ASSERT_EQ(prig_scan(c.get(), kLinear, R"(["1/3", "1/2"])", &out), PRIG_OK) << prig_last_error(c.get());
    json j = take(out);
    EXPECT_EQ(j["tuples"], 27);
    EXPECT_EQ(j["sets"][0]["members"], json::array({"0:0", "1:1", "1:2"}));
    EXPECT_EQ(j["sets"][1]["members"], json::array({"0:0"}));

    ASSERT_EQ(prig_profile(c.get(), kLinear, &out), PRIG_OK);
    json prof = take(out);
    EXPECT_EQ(prof["profile"][3]["max"], "1/18");
    EXPECT_FALSE(prof.contains("entries"));

    EXPECT_EQ(prig_scan(c.get(), kLinear, R"(["x"])", &out), PRIG_E_INPUT);
    EXPECT_EQ(prig_scan(c.get(), R"({"p":2,"precision":12,"degree_bound":16,"vars":1,"coeff_ring":"Zp","terms":[]})",
                        nullptr, &out),
              PRIG_E_INPUT);
}

TEST(CApi, DetectExitCodes)
{
    Context c = make({{"p", 3}, {"level", 3}});
    char* out = nullptr;
    ASSERT_EQ(prig_detect(c.get(), kBinomial5, &out), PRIG_OK) << prig_last_error(c.get());
    json j = take(out);
    EXPECT_EQ(j["outcome"], "special-found");
    EXPECT_EQ(j["witness"]["exponents"][1]["value"], "5");
    EXPECT_EQ(j["witness"]["exponents"][1]["modulus_exp"], 3);

    ASSERT_EQ(prig_detect(c.get(), kLinear, &out), PRIG_BOUNDED_BELOW);
    json b = take(out);
    EXPECT_EQ(b["constant"], "1/2");
    EXPECT_EQ(b["exceptions"], json::array({"0:0"}));
}

TEST(CApi, UndecidedDominatedRun)
{
    // 8X truncated at degree 2 is only known up to 3 v(x), below the exact
    // valuation 4 of the constant 16, so the minimum over the two generators
    // is undecided at every nonzero point.
    Context c = make({{"p", 2}, {"precision", 12}, {"degree_bound", 2}, {"level", 4}});
    const char* gens = R"([{"p":2,"precision":12,"degree_bound":2,"vars":1,"coeff_ring":"Zp",
                            "terms":[{"exp":[1],"coeff":"8"}]},
                           {"p":2,"precision":12,"degree_bound":2,"vars":1,"coeff_ring":"Zp","polynomial":true,
                            "terms":[{"exp":[0],"coeff":"16"}]}])";
    char* out = nullptr;
    EXPECT_EQ(prig_scan(c.get(), gens, nullptr, &out), PRIG_UNDECIDED);
    json j = take(out);
    EXPECT_EQ(j["undecided"], 15);
}

TEST(CApi, ChangeVarsAndNormalize)
{
    Context c = make({{"p", 3}, {"level", 2}});
    char* out = nullptr;
    const char* cv = R"({"permutation":[0,1],"entries":[{"i":1,"j":0,"value":"-5","modulus_exp":20}]})";
    ASSERT_EQ(prig_changevars(c.get(), kBinomial5, cv, R"(["2:1,2:5"])", &out), PRIG_OK) << prig_last_error(c.get());
    json j = take(out);
    EXPECT_EQ(j["tuples"], json::array({"2:1,0:0"}));

    const char* identity = R"({"permutation":[0,1],"entries":[]})";
    ASSERT_EQ(prig_changevars(c.get(), kBinomial5, identity, nullptr, &out), PRIG_OK);
    const std::string echoed = take(out)["series"].dump();
    prig_status st = PRIG_OK;
    prig_series* a = prig_series_parse(kBinomial5, &st);
    prig_series* b = prig_series_parse(echoed.c_str(), &st);
    EXPECT_EQ(prig_series_equal(a, b), 1);
    prig_series_free(a);
    prig_series_free(b);

    ASSERT_EQ(prig_normalize(c.get(), R"(["1:1,0:0","2:1,1:1","3:1,2:1","4:1,3:1"])", &out), PRIG_OK)
        << prig_last_error(c.get());
    json n = take(out);
    EXPECT_EQ(n["normalized"].back(), "4:1,0:0");
    EXPECT_EQ(prig_normalize(c.get(), R"([1])", &out), PRIG_E_INPUT);
}

TEST(CApi, SeriesHandles)
{
    prig_status st = PRIG_E_INTERNAL;
    prig_series* a = prig_series_parse(kBinomial5, &st);
    ASSERT_NE(a, nullptr);
    EXPECT_EQ(st, PRIG_OK);
    char* text = prig_series_to_json(a);
    prig_series* b = prig_series_parse(text, &st);
    prig_string_free(text);
    ASSERT_NE(b, nullptr);
    EXPECT_EQ(prig_series_equal(a, b), 1);
    prig_series* c = prig_series_parse(kLinear, &st);
    EXPECT_EQ(prig_series_equal(a, c), 0);
    prig_series_free(a);
    prig_series_free(b);
    prig_series_free(c);

    EXPECT_EQ(prig_series_parse(R"({"p":3})", &st), nullptr);
    EXPECT_EQ(st, PRIG_E_INPUT);
    EXPECT_STRNE(prig_last_error(nullptr), "");
}
