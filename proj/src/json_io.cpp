// Copyright 2026 The prig Authors
// SPDX-License-Identifier: Apache-2.0

#include "prig/json_io.hpp"

#include <charconv>

namespace prig {

namespace {

template <class F>
auto guarded(const char* what, F&& f)
{
    try {
        return f();
    } catch (const json::exception& e) {
        throw ParseError(std::string(what) + ": " + e.what());
    }
}

mpz_class parse_integer(const json& j)
{
    if (j.is_number_integer())
        return mpz_class(std::to_string(j.get<std::int64_t>()));
    if (!j.is_string())
        throw ParseError("expected a decimal string, got " + j.dump());
    mpz_class v;
    const std::string s = j.get<std::string>();
    if (s.empty() || v.set_str(s, 10) != 0)
        throw ParseError("'" + s + "' is not a decimal integer");
    return v;
}

json strings(const std::vector<mpz_class>& v)
{
    json a = json::array();
    for (const auto& x : v)
        a.push_back(x.get_str());
    return a;
}

json tuples_json(const ScanReport& r, const std::vector<std::size_t>& idx)
{
    json a = json::array();
    for (auto i : idx)
        a.push_back(tuple_str(r.entries[i].tuple));
    return a;
}

json tuples_json(const std::vector<TorsionTuple>& ts)
{
    json a = json::array();
    for (const auto& t : ts)
        a.push_back(tuple_str(t));
    return a;
}

json profile_json(const ScanReport& r)
{
    json a = json::array();
    for (const auto& lp : r.profile) {
        json e;
        e["level"] = lp.level;
        e["tuples"] = lp.tuples;
        e["zeros"] = lp.zeros;
        e["undecided"] = lp.undecided;
        e["max"] = lp.max_value ? json(lp.max_value->str()) : json(nullptr);
        e["argmax"] = tuples_json(r, lp.argmax);
        a.push_back(std::move(e));
    }
    return a;
}

} // namespace

json ring_to_json(const EisensteinRing& ring)
{
    if (ring.is_base())
        return "Zp";
    json j;
    j["p"] = ring.prime();
    j["precision"] = ring.precision();
    j["minpoly"] = strings(ring.minpoly());
    j["label"] = ring.label();
    return j;
}

RingPtr ring_from_json(const json& j, std::uint32_t p, int precision)
{
    return guarded("coeff_ring", [&]() -> RingPtr {
        if (j.is_string()) {
            const std::string s = j.get<std::string>();
            if (s == "Zp")
                return EisensteinRing::base(p, precision);
            if (s.starts_with("cyclotomic:")) {
                const std::string_view digits = std::string_view(s).substr(11);
                unsigned k = 0;
                auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
                if (ec != std::errc() || end != digits.data() + digits.size() || k == 0)
                    throw ParseError("bad cyclotomic level in '" + s + "'");
                return EisensteinRing::cyclotomic(p, k, precision);
            }
            throw ParseError("unknown coefficient ring '" + s + "'");
        }
        if (!j.is_object())
            throw ParseError("coefficient ring must be \"Zp\" or a descriptor object");
        if (j.at("p").get<std::uint32_t>() != p || j.at("precision").get<int>() != precision)
            throw ParseError("coefficient ring descriptor disagrees with the series' p or precision");
        IntPoly minpoly;
        for (const auto& c : j.at("minpoly"))
            minpoly.push_back(parse_integer(c));
        return EisensteinRing::make(p, std::move(minpoly), precision, j.value("label", std::string("custom")));
    });
}

json element_to_json(const RingElement& a)
{
    json j;
    j["ring"] = ring_to_json(*a.ring());
    j["coeffs"] = strings(a.coeffs());
    j["valuation"] = element_valuation(a).str();
    return j;
}

json padic_to_json(const PadicApprox& a)
{
    return json{{"value", a.value().get_str()}, {"modulus_exp", a.precision()}};
}

PadicApprox padic_from_json(const json& j, std::uint32_t p)
{
    return guarded("p-adic value", [&] {
        if (!j.is_object())
            throw ParseError("p-adic values are {\"value\", \"modulus_exp\"} objects");
        return PadicApprox(p, j.at("modulus_exp").get<int>(), parse_integer(j.at("value")));
    });
}

json series_to_json(const MultiSeries& s)
{
    const RingPtr& R = s.ring();
    json j;
    j["p"] = R->prime();
    j["precision"] = R->precision();
    j["degree_bound"] = s.degree_bound();
    j["vars"] = s.nvars();
    j["coeff_ring"] = ring_to_json(*R);
    if (s.is_polynomial())
        j["polynomial"] = true;
    json terms = json::array();
    for (const auto& [m, c] : s.terms()) {
        json t;
        t["exp"] = exponents(m, s.nvars());
        if (R->is_base())
            t["coeff"] = c.coeffs()[0].get_str();
        else
            t["coeff"] = strings(c.coeffs());
        terms.push_back(std::move(t));
    }
    j["terms"] = std::move(terms);
    return j;
}

MultiSeries series_from_json(const json& j)
{
    return guarded("series", [&] {
        if (!j.is_object())
            throw ParseError("a series must be a JSON object");
        const auto p = j.at("p").get<std::uint32_t>();
        const int N = j.at("precision").get<int>();
        const auto D = j.at("degree_bound").get<unsigned>();
        const auto n = j.at("vars").get<unsigned>();
        if (n == 0 || n > kMaxVars)
            throw ParseError("vars must be between 1 and " + std::to_string(kMaxVars));
        if (D > kMaxDegree)
            throw ParseError("degree_bound must be at most " + std::to_string(kMaxDegree));
        RingPtr R = ring_from_json(j.contains("coeff_ring") ? j.at("coeff_ring") : json("Zp"), p, N);
        MultiSeries s(R, n, D, j.value("polynomial", false));
        for (const auto& t : j.at("terms")) {
            const auto e = t.at("exp").get<std::vector<unsigned>>();
            if (e.size() != n)
                throw ParseError("term exponent " + t.at("exp").dump() + " does not have " + std::to_string(n) +
                                 " entries");
            unsigned deg = 0;
            for (auto x : e)
                deg += x;
            if (deg > D)
                throw ParseError("term exponent " + t.at("exp").dump() + " exceeds the degree bound");
            const json& c = t.at("coeff");
            std::vector<mpz_class> coeffs(R->degree());
            if (c.is_array()) {
                if (c.size() != R->degree())
                    throw ParseError("ring coefficient needs " + std::to_string(R->degree()) + " entries");
                for (std::size_t i = 0; i < c.size(); ++i)
                    coeffs[i] = parse_integer(c[i]);
            } else {
                coeffs[0] = parse_integer(c);
            }
            s.add_term(make_monomial(e), RingElement(R, std::move(coeffs)));
        }
        return s;
    });
}

LTParams lt_params_from_json(const json& j)
{
    return guarded("Lubin-Tate parameters", [&] {
        const json& f = j.at("f");
        if (f.is_string()) {
            const auto p = j.at("p").get<std::uint32_t>();
            const std::string name = f.get<std::string>();
            if (name == "cyclotomic")
                return LTParams::cyclotomic(p);
            if (name == "standard")
                return LTParams::standard(p);
            throw ParseError("unknown Lubin-Tate polynomial '" + name + "'");
        }
        MultiSeries s = series_from_json(f);
        if (j.contains("p") && j.at("p").get<std::uint32_t>() != s.ring()->prime())
            throw ParseError("f uses a different prime than p");
        return LTParams::custom(s);
    });
}

json lt_params_to_json(const LTParams& params)
{
    json j;
    j["p"] = params.prime();
    if (params.kind() == LTKind::custom)
        j["f"] = series_to_json(*params.custom_series());
    else
        j["f"] = params.name();
    return j;
}

json change_of_vars_to_json(const ChangeOfVariables& cv)
{
    json j;
    j["permutation"] = cv.permutation();
    json entries = json::array();
    for (unsigned i = 1; i < cv.nvars(); ++i)
        for (unsigned k = 0; k < i; ++k)
            if (const auto& e = cv.entry(i, k)) {
                json x = padic_to_json(*e);
                x["i"] = i;
                x["j"] = k;
                entries.push_back(std::move(x));
            }
    j["entries"] = std::move(entries);
    return j;
}

ChangeOfVariables change_of_vars_from_json(const json& j, std::uint32_t p)
{
    return guarded("change of variables", [&] {
        ChangeOfVariables cv(j.at("permutation").get<std::vector<unsigned>>());
        if (j.contains("entries"))
            for (const auto& e : j.at("entries"))
                cv.set_entry(e.at("i").get<unsigned>(), e.at("j").get<unsigned>(), padic_from_json(e, p));
        return cv;
    });
}

json axiom_report_to_json(const AxiomReport& r)
{
    static const char* names[] = {"equivariance", "additivity", "composition", "normalization"};
    json j;
    j["params"] = r.params;
    j["precision"] = r.precision;
    j["degree_bound"] = r.degree_bound;
    j["trials"] = r.trials;
    json axioms = json::array();
    for (std::size_t i = 0; i < r.axioms.size(); ++i) {
        json a;
        a["axiom"] = i + 1;
        a["name"] = names[i];
        a["pass"] = r.axioms[i].pass;
        a["checks"] = r.axioms[i].checks;
        if (!r.axioms[i].pass)
            a["first_failure"] = r.axioms[i].first_failure;
        axioms.push_back(std::move(a));
    }
    j["axioms"] = std::move(axioms);
    j["all_pass"] = r.all_pass();
    return j;
}

json scan_report_to_json(const ScanReport& r, bool include_entries)
{
    json j;
    j["p"] = r.p;
    j["vars"] = r.nvars;
    j["level"] = r.level;
    j["group"] = r.group;
    j["mode"] = r.exhaustive ? "exhaustive" : "sample";
    j["tuples"] = r.entries.size();
    j["undecided"] = r.undecided_count();
    json sets = json::array();
    for (const auto& s : r.sets) {
        json x;
        x["threshold"] = s.threshold.str();
        x["members"] = tuples_json(r, s.members);
        x["undecided"] = tuples_json(r, s.undecided);
        sets.push_back(std::move(x));
    }
    j["sets"] = std::move(sets);
    j["profile"] = profile_json(r);
    if (include_entries) {
        json entries = json::array();
        for (const auto& e : r.entries) {
            json x;
            x["tuple"] = tuple_str(e.tuple);
            json vals = json::array();
            for (const auto& v : e.values)
                vals.push_back(v.str());
            x["values"] = std::move(vals);
            x["min"] = e.min_value.str();
            x["ceiling"] = e.ceiling.str();
            entries.push_back(std::move(x));
        }
        j["entries"] = std::move(entries);
    }
    return j;
}

json witness_to_json(const SpecialWitness& w)
{
    json j;
    j["kind"] = std::string(to_string(w.kind));
    json ex = json::array();
    for (const auto& e : w.exponents)
        ex.push_back(padic_to_json(e));
    j["exponents"] = std::move(ex);
    j["lifts"] = strings(w.lifts);
    j["translate"] = tuple_str(w.translate);
    j["parameter"] = w.parameter;
    j["residual"] = w.residual.str();
    j["required"] = w.required.str();
    return j;
}

json dichotomy_report_to_json(const DichotomyReport& r)
{
    json j;
    j["outcome"] = std::string(to_string(r.outcome));
    j["level"] = r.level;
    j["precision"] = r.precision;
    j["degree_bound"] = r.degree_bound;
    j["group"] = r.scan.group;
    if (r.witness)
        j["witness"] = witness_to_json(*r.witness);
    if (r.outcome == Outcome::bounded_below) {
        j["constant"] = r.constant.str();
        j["exceptions"] = tuples_json(r.exceptions);
    }
    j["undecided"] = tuples_json(r.undecided);
    j["profile"] = profile_json(r.scan);
    j["diagnostics"] = r.diagnostics;
    return j;
}

json normalized_sequence_to_json(const NormalizedSequence& ns)
{
    json j;
    j["change_of_vars"] = change_of_vars_to_json(ns.cv);
    j["normalized"] = tuples_json(ns.normalized);
    json limits = json::array();
    for (const auto& l : ns.limits)
        limits.push_back(l ? padic_to_json(*l) : json(nullptr));
    j["limits"] = std::move(limits);
    j["finite_projection"] = ns.finite_projection;
    json chains = json::array();
    for (const auto& row : ns.chains) {
        json r = json::array();
        for (const auto& c : row)
            r.push_back(c ? padic_to_json(*c) : json(nullptr));
        chains.push_back(std::move(r));
    }
    j["chains"] = std::move(chains);
    if (!ns.diagnostic.empty())
        j["diagnostic"] = ns.diagnostic;
    return j;
}

} // namespace prig
