// Copyright 2026 The prig Authors
// SPDX-License-Identifier: Apache-2.0

// prig: command-line front end over the C API.
//
//   prig lt-build   --group standard --a 2 --a 5
//   prig verify     --group standard --trials 50
//   prig scan       --in ideal.json --level 2 --eps 10
//   prig detect     --in phi.json --level 3
//   prig profile    --in ideal.json --level 4
//   prig changevars --in phi.json --cv cv.json --tuples "2:1,1:1"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "prig/prig.h"

namespace {

using json = nlohmann::ordered_json;

struct Options {
    unsigned p = 3;
    int precision = 12;
    unsigned degree = 16;
    unsigned level = 2;
    std::string group;
    std::string mode = "exhaustive";
    std::uint64_t count = 1000;
    std::uint64_t cap = 1000000;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    std::string in;
    std::string out;

    std::vector<std::string> a_values;
    unsigned trials = 20;
    std::vector<std::string> eps;
    std::string cv;
    std::vector<std::string> tuples;
};

std::string read_file(const std::string& path)
{
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream f(path);
    if (!f)
        throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

json group_json(const std::string& g)
{
    if (g.empty() || g == "multiplicative" || g == "cyclotomic" || g == "standard")
        return g.empty() ? json("multiplicative") : json(g);
    return json::parse(read_file(g));
}

std::string config_json(const Options& o, const std::string& default_group)
{
    json c;
    c["p"] = o.p;
    c["precision"] = o.precision;
    c["degree_bound"] = o.degree;
    c["level"] = o.level;
    c["group"] = group_json(o.group.empty() ? default_group : o.group);
    c["mode"] = o.mode;
    c["count"] = o.count;
    c["cap"] = o.cap;
    c["seed"] = o.seed;
    c["threads"] = o.threads;
    return c.dump();
}

int finish(prig_context* ctx, prig_status st, char* report, const Options& o)
{
    if (report) {
        if (o.out.empty()) {
            std::fputs(report, stdout);
            std::fputc('\n', stdout);
        } else {
            std::ofstream f(o.out);
            f << report << '\n';
            if (!f) {
                std::cerr << "prig: cannot write " << o.out << "\n";
                prig_string_free(report);
                return PRIG_E_INPUT;
            }
        }
        prig_string_free(report);
    }
    if (st == PRIG_E_INPUT || st == PRIG_E_INTERNAL)
        std::cerr << "prig: " << prig_last_error(ctx) << "\n";
    return static_cast<int>(st);
}

int run(const std::string& command, const Options& o)
{
    const bool lt_command = command == "lt-build" || command == "verify";
    prig_status st = PRIG_OK;
    prig_context* ctx = prig_context_new(config_json(o, lt_command ? "standard" : "multiplicative").c_str(), &st);
    if (!ctx) {
        std::cerr << "prig: " << prig_last_error(nullptr) << "\n";
        return static_cast<int>(st);
    }

    std::string input;
    if (!lt_command) {
        if (o.in.empty()) {
            std::cerr << "prig: " << command << " needs --in\n";
            prig_context_free(ctx);
            return PRIG_E_INPUT;
        }
        input = read_file(o.in);
    }

    char* report = nullptr;
    if (command == "lt-build") {
        json as = json::array();
        for (const auto& a : o.a_values)
            as.push_back(a);
        st = prig_lt_build(ctx, as.dump().c_str(), &report);
    } else if (command == "verify") {
        st = prig_verify_axioms(ctx, o.trials, &report);
    } else if (command == "scan") {
        json eps = json::array();
        for (const auto& e : o.eps)
            eps.push_back(e);
        st = prig_scan(ctx, input.c_str(), eps.dump().c_str(), &report);
    } else if (command == "detect") {
        st = prig_detect(ctx, input.c_str(), &report);
    } else if (command == "profile") {
        st = prig_profile(ctx, input.c_str(), &report);
    } else if (command == "changevars") {
        std::string cv = o.cv.empty() ? std::string() : read_file(o.cv);
        if (cv.empty()) {
            // Identity on the series' variable count.
            json s = json::parse(input);
            json perm = json::array();
            for (unsigned i = 0; i < s.at("vars").get<unsigned>(); ++i)
                perm.push_back(i);
            cv = json{{"permutation", perm}, {"entries", json::array()}}.dump();
        }
        json ts = json::array();
        for (const auto& t : o.tuples)
            ts.push_back(t);
        st = prig_changevars(ctx, input.c_str(), cv.c_str(), ts.dump().c_str(), &report);
    }
    int code = finish(ctx, st, report, o);
    prig_context_free(ctx);
    return code;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact p-adic power series, Lubin-Tate groups and torsion scans"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--p", o.p, "prime")->capture_default_str();
        sub->add_option("--precision", o.precision, "p-adic precision N")->capture_default_str();
        sub->add_option("--degree", o.degree, "total degree bound D")->capture_default_str();
        sub->add_option("--level", o.level, "torsion level K")->capture_default_str();
        sub->add_option("--group", o.group,
                        "multiplicative, cyclotomic, standard, or a Lubin-Tate parameter JSON file");
        sub->add_option("--mode", o.mode, "exhaustive or sample")
            ->check(CLI::IsMember({"exhaustive", "sample"}))
            ->capture_default_str();
        sub->add_option("--count", o.count, "tuples drawn in sample mode")->capture_default_str();
        sub->add_option("--cap", o.cap, "largest exhaustive enumeration")->capture_default_str();
        sub->add_option("--seed", o.seed, "seed for sampling and random trials")->capture_default_str();
        sub->add_option("--threads", o.threads, "scan worker threads (0 = all cores)")->capture_default_str();
        sub->add_option("--in", o.in, "input JSON file ('-' for stdin)");
        sub->add_option("--out", o.out, "report path (default stdout)");
    };

    auto* lt = app.add_subcommand("lt-build", "emit the group law and [a] series");
    common(lt);
    lt->add_option("--a", o.a_values, "endomorphism scalar (repeatable)");
    auto* verify = app.add_subcommand("verify", "check the Lubin-Tate axioms");
    common(verify);
    verify->add_option("--trials", o.trials, "random (a, b) pairs")->capture_default_str();
    auto* scan = app.add_subcommand("scan", "evaluate an ideal on torsion tuples");
    common(scan);
    scan->add_option("--eps", o.eps, "valuation threshold, e.g. 1/2 (repeatable)");
    auto* detect = app.add_subcommand("detect", "dichotomy report with special detection");
    common(detect);
    auto* profile = app.add_subcommand("profile", "per-level min-valuation profile");
    common(profile);
    auto* cv = app.add_subcommand("changevars", "pull a series back along a change of variables");
    common(cv);
    cv->add_option("--cv", o.cv, "change-of-variables JSON file (default identity)");
    cv->add_option("--tuples", o.tuples, "tuple to move, e.g. 2:4,1:1 (repeatable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : PRIG_E_INPUT;
    }

    try {
        return run(app.get_subcommands().front()->get_name(), o);
    } catch (const std::exception& e) {
        std::cerr << "prig: " << e.what() << "\n";
        return PRIG_E_INPUT;
    }
}
