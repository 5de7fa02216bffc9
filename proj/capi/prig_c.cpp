// Copyright 2026 The prig Authors
// SPDX-License-Identifier: Apache-2.0

#include "prig/prig.h"

#include <cstring>

#include "prig/json_io.hpp"

using prig::json;

struct prig_context {
    std::uint32_t p = 3;
    int precision = 12;
    unsigned degree_bound = 16;
    unsigned level = 2;
    json group_spec = "multiplicative";
    prig::EnumerationMode mode;
    unsigned threads = 0;

    prig::GroupPtr group;
    std::string error;
};

struct prig_series {
    prig::MultiSeries series;
};

namespace {

thread_local std::string g_error;

char* dup_string(const std::string& s)
{
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out)
        throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

json parse_text(const char* text, const char* what)
{
    if (!text)
        throw prig::ParseError(std::string(what) + " is missing");
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw prig::ParseError(std::string(what) + " is not valid JSON: " + e.what());
    }
}

template <class F>
prig_status guarded(std::string& error, F&& f)
{
    try {
        error.clear();
        return f();
    } catch (const prig::Error& e) {
        error = e.what();
        return PRIG_E_INPUT;
    } catch (const json::exception& e) {
        error = e.what();
        return PRIG_E_INPUT;
    } catch (const std::exception& e) {
        error = e.what();
        return PRIG_E_INTERNAL;
    } catch (...) {
        error = "unknown error";
        return PRIG_E_INTERNAL;
    }
}

// Lubin-Tate parameters named by the group spec; nullopt for G_m.
std::optional<prig::LTParams> lt_params_of(const prig_context* ctx)
{
    const json& g = ctx->group_spec;
    json spec = g;
    if (g.is_string()) {
        const std::string name = g.get<std::string>();
        if (name == "multiplicative")
            return std::nullopt;
        if (name != "cyclotomic" && name != "standard")
            throw prig::ParseError("unknown group '" + name + "'");
        spec = json{{"p", ctx->p}, {"f", name}};
    }
    prig::LTParams params = prig::lt_params_from_json(spec);
    if (params.prime() != ctx->p)
        throw prig::ParseError("Lubin-Tate parameters use a different prime than the configuration");
    return params;
}

const prig::GroupPtr& group_of(prig_context* ctx)
{
    if (!ctx->group) {
        if (auto params = lt_params_of(ctx))
            ctx->group =
                prig::TorsionGroup::lubin_tate(prig::LTGroup::build(*params, ctx->degree_bound, ctx->precision));
        else
            ctx->group = prig::TorsionGroup::multiplicative(ctx->p, ctx->precision, ctx->degree_bound);
    }
    return ctx->group;
}

const prig::LTGroup& lt_group_of(prig_context* ctx)
{
    const auto& g = group_of(ctx);
    if (g->kind() != prig::GroupKind::lubin_tate)
        throw prig::DomainError("this command needs a Lubin-Tate group; set group to Lubin-Tate parameters");
    return *g->lt();
}

std::vector<prig::MultiSeries> parse_generators(prig_context* ctx, const char* text)
{
    json j = parse_text(text, "generators");
    if (j.is_object() && j.contains("generators"))
        j = j.at("generators");
    if (j.is_object())
        j = json::array({j});
    if (!j.is_array() || j.empty())
        throw prig::ParseError("generators must be a series, a non-empty array of series, or {\"generators\": [...]}");
    std::vector<prig::MultiSeries> gens;
    for (const auto& s : j) {
        prig::MultiSeries m = prig::series_from_json(s);
        if (m.ring()->prime() != ctx->p)
            throw prig::ParseError("generator uses p = " + std::to_string(m.ring()->prime()) +
                                   " but the configuration has p = " + std::to_string(ctx->p));
        if (m.ring()->precision() < ctx->precision)
            throw prig::PrecisionError("generator precision is below the configured precision");
        gens.push_back(m.with_precision(ctx->precision));
    }
    return gens;
}

prig_status undecided_status(const prig::ScanReport& r, prig_status otherwise)
{
    return 2 * r.undecided_count() > r.entries.size() ? PRIG_UNDECIDED : otherwise;
}

prig_status emit(const json& j, char** out)
{
    if (!out)
        throw prig::ParseError("output pointer is NULL");
    *out = dup_string(j.dump(2));
    return PRIG_OK;
}

prig::ScanOptions scan_options(const prig_context* ctx)
{
    prig::ScanOptions o;
    o.level = ctx->level;
    o.mode = ctx->mode;
    o.threads = ctx->threads;
    return o;
}

} // namespace

extern "C" {

prig_context* prig_context_new(const char* config_json, prig_status* status)
{
    auto ctx = std::make_unique<prig_context>();
    prig_status st = guarded(g_error, [&] {
        json c = config_json ? parse_text(config_json, "configuration") : json::object();
        if (!c.is_object())
            throw prig::ParseError("configuration must be a JSON object");
        ctx->p = c.value("p", 3u);
        ctx->precision = c.value("precision", 12);
        ctx->degree_bound = c.value("degree_bound", 16u);
        ctx->level = c.value("level", 2u);
        ctx->threads = c.value("threads", 0u);
        if (c.contains("group"))
            ctx->group_spec = c.at("group");
        const std::string mode = c.value("mode", std::string("exhaustive"));
        const auto cap = c.value("cap", prig::kDefaultEnumerationCap);
        if (mode == "exhaustive")
            ctx->mode = prig::EnumerationMode::all(cap);
        else if (mode == "sample")
            ctx->mode = prig::EnumerationMode::sample(c.value("count", std::uint64_t{1000}),
                                                      c.value("seed", std::uint64_t{0}));
        else
            throw prig::ParseError("mode must be \"exhaustive\" or \"sample\"");
        ctx->mode.seed = c.value("seed", std::uint64_t{0});
        if (!prig::is_prime(ctx->p))
            throw prig::DomainError("p = " + std::to_string(ctx->p) + " is not prime");
        if (ctx->precision < 1 || ctx->degree_bound < 1 || ctx->level < 1)
            throw prig::DomainError("precision, degree_bound and level must be at least 1");
        if (ctx->degree_bound > prig::kMaxDegree)
            throw prig::DomainError("degree_bound must be at most 255");
        if (cap < 1)
            throw prig::DomainError("cap must be at least 1");
        if (!ctx->mode.exhaustive && ctx->mode.count < 1)
            throw prig::DomainError("sample count must be at least 1");
        // Validates the group now; building it waits for the first command.
        lt_params_of(ctx.get());
        return PRIG_OK;
    });
    if (status)
        *status = st;
    return st == PRIG_OK ? ctx.release() : nullptr;
}

void prig_context_free(prig_context* ctx)
{
    delete ctx;
}

const char* prig_last_error(const prig_context* ctx)
{
    return ctx ? ctx->error.c_str() : g_error.c_str();
}

void prig_string_free(char* s)
{
    std::free(s);
}

const char* prig_version(void)
{
    return "0.1.0";
}

prig_status prig_lt_build(prig_context* ctx, const char* a_values_json, char** out_json)
{
    if (!ctx)
        return PRIG_E_INPUT;
    return guarded(ctx->error, [&] {
        const prig::LTGroup& g = lt_group_of(ctx);
        json out;
        out["params"] = prig::lt_params_to_json(g.params());
        out["law"] = prig::series_to_json(g.law());
        json brackets = json::array();
        if (a_values_json) {
            json as = parse_text(a_values_json, "a values");
            if (!as.is_array())
                throw prig::ParseError("a values must be a JSON array");
            for (const auto& a : as) {
                mpz_class v;
                const std::string s = a.is_string() ? a.get<std::string>() : a.dump();
                if (v.set_str(s, 10) != 0)
                    throw prig::ParseError("'" + s + "' is not an integer");
                brackets.push_back({{"a", v.get_str()}, {"series", prig::series_to_json(g.bracket(v))}});
            }
        }
        out["brackets"] = std::move(brackets);
        return emit(out, out_json);
    });
}

prig_status prig_verify_axioms(prig_context* ctx, uint32_t trials, char** out_json)
{
    if (!ctx)
        return PRIG_E_INPUT;
    return guarded(ctx->error, [&] {
        const prig::LTGroup& g = lt_group_of(ctx);
        prig::AxiomReport r =
            prig::verify_axioms(g.params(), ctx->degree_bound, ctx->precision, trials, ctx->mode.seed);
        emit(prig::axiom_report_to_json(r), out_json);
        return r.all_pass() ? PRIG_OK : PRIG_CHECK_FAILED;
    });
}

prig_status prig_scan(prig_context* ctx, const char* generators_json, const char* thresholds_json, char** out_json)
{
    if (!ctx)
        return PRIG_E_INPUT;
    return guarded(ctx->error, [&] {
        auto gens = parse_generators(ctx, generators_json);
        prig::ScanOptions o = scan_options(ctx);
        if (thresholds_json) {
            json t = parse_text(thresholds_json, "thresholds");
            if (!t.is_array())
                throw prig::ParseError("thresholds must be a JSON array of rationals");
            for (const auto& x : t)
                o.thresholds.push_back(prig::Rational::parse(x.is_string() ? x.get<std::string>() : x.dump()));
        }
        prig::ScanReport r = prig::scan(group_of(ctx), gens, o);
        emit(prig::scan_report_to_json(r), out_json);
        return undecided_status(r, PRIG_OK);
    });
}

prig_status prig_profile(prig_context* ctx, const char* generators_json, char** out_json)
{
    if (!ctx)
        return PRIG_E_INPUT;
    return guarded(ctx->error, [&] {
        auto gens = parse_generators(ctx, generators_json);
        prig::ScanReport r = prig::scan(group_of(ctx), gens, scan_options(ctx));
        emit(prig::scan_report_to_json(r, false), out_json);
        return undecided_status(r, PRIG_OK);
    });
}

prig_status prig_detect(prig_context* ctx, const char* generators_json, char** out_json)
{
    if (!ctx)
        return PRIG_E_INPUT;
    return guarded(ctx->error, [&] {
        auto gens = parse_generators(ctx, generators_json);
        prig::DichotomyOptions o;
        o.level = ctx->level;
        o.mode = ctx->mode;
        o.threads = ctx->threads;
        prig::DichotomyReport r = prig::dichotomy_report(group_of(ctx), gens, o);
        emit(prig::dichotomy_report_to_json(r), out_json);
        if (r.outcome == prig::Outcome::special_found)
            return PRIG_OK;
        return undecided_status(r.scan, PRIG_BOUNDED_BELOW);
    });
}

prig_status prig_changevars(prig_context* ctx, const char* series_json, const char* cv_json,
                            const char* tuples_json, char** out_json)
{
    if (!ctx)
        return PRIG_E_INPUT;
    return guarded(ctx->error, [&] {
        prig::MultiSeries phi = prig::series_from_json(parse_text(series_json, "series"));
        const std::uint32_t p = phi.ring()->prime();
        prig::ChangeOfVariables cv = prig::change_of_vars_from_json(parse_text(cv_json, "change of variables"), p);
        json out;
        prig::MultiSeries moved = cv.is_identity() ? phi : group_of(ctx)->change_of_vars(phi, cv);
        out["series"] = prig::series_to_json(moved);
        json tuples = json::array();
        if (tuples_json) {
            json ts = parse_text(tuples_json, "tuples");
            if (!ts.is_array())
                throw prig::ParseError("tuples must be a JSON array of strings");
            for (const auto& t : ts)
                tuples.push_back(
                    prig::tuple_str(prig::action_on_torsion(p, cv, prig::parse_tuple(p, t.get<std::string>()))));
        }
        out["tuples"] = std::move(tuples);
        return emit(out, out_json);
    });
}

prig_status prig_normalize(prig_context* ctx, const char* tuples_json, char** out_json)
{
    if (!ctx)
        return PRIG_E_INPUT;
    return guarded(ctx->error, [&] {
        json ts = parse_text(tuples_json, "tuples");
        if (!ts.is_array())
            throw prig::ParseError("tuples must be a JSON array of strings");
        std::vector<prig::TorsionTuple> tuples;
        for (const auto& t : ts)
            tuples.push_back(prig::parse_tuple(ctx->p, t.get<std::string>()));
        return emit(prig::normalized_sequence_to_json(prig::normalize_sequence(ctx->p, tuples)), out_json);
    });
}

prig_series* prig_series_parse(const char* text, prig_status* status)
{
    std::unique_ptr<prig_series> s;
    prig_status st = guarded(g_error, [&] {
        s.reset(new prig_series{prig::series_from_json(parse_text(text, "series"))});
        return PRIG_OK;
    });
    if (status)
        *status = st;
    return st == PRIG_OK ? s.release() : nullptr;
}

char* prig_series_to_json(const prig_series* s)
{
    if (!s)
        return nullptr;
    try {
        return dup_string(prig::series_to_json(s->series).dump(2));
    } catch (...) {
        return nullptr;
    }
}

int prig_series_equal(const prig_series* a, const prig_series* b)
{
    if (!a || !b)
        return 0;
    try {
        return a->series == b->series && a->series.is_polynomial() == b->series.is_polynomial() ? 1 : 0;
    } catch (...) {
        return 0;
    }
}

void prig_series_free(prig_series* s)
{
    delete s;
}

} // extern "C"
