// Copyright 2026 The prig Authors
// SPDX-License-Identifier: Apache-2.0

#include "prig/rigidity.hpp"

#include <algorithm>
#include <numeric>

namespace prig {

std::string_view to_string(WitnessKind k)
{
    return k == WitnessKind::binomial_relation ? "binomial-relation" : "subtorus-translate";
}

std::string_view to_string(Outcome o)
{
    return o == Outcome::special_found ? "special-found" : "bounded-below";
}

namespace {

// Precision at which integer lifts of exponents are handed to the series
// builders: enough for binomial series and for Lubin-Tate brackets.
int lift_precision(const GroupPtr& group, int precision, unsigned degree_bound)
{
    return std::max(binomial_exponent_precision(group->prime(), precision, degree_bound),
                    lt_working_precision(precision, degree_bound));
}

MultiSeries into_ring(const MultiSeries& s, const RingPtr& R)
{
    return same_ring(s.ring(), R) ? s : s.lift_to(R);
}

// x = P * pivot for points of Q_p/Z_p; P mod p^{pivot.level} when it exists.
std::optional<mpz_class> chain_exponent(std::uint32_t p, const TorsionPoint& pivot, const TorsionPoint& x)
{
    if (pivot.is_origin() || x.level > pivot.level)
        return std::nullopt;
    const mpz_class mod = prime_power(p, pivot.level);
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), pivot.exponent.get_mpz_t(), mod.get_mpz_t());
    mpz_class r = x.exponent * prime_power(p, pivot.level - x.level) * inv;
    mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), mod.get_mpz_t());
    return r;
}

// Most frequent value; ties go to the smaller one and set `tied`.
mpz_class majority(const std::vector<mpz_class>& values, bool& tied)
{
    std::map<mpz_class, std::size_t> count;
    for (const auto& v : values)
        ++count[v];
    auto best = count.begin();
    for (auto it = count.begin(); it != count.end(); ++it)
        if (it->second > best->second)
            best = it;
    tied = std::count_if(count.begin(), count.end(), [&](const auto& kv) { return kv.second == best->second; }) > 1;
    return best->first;
}

// Applies sigma and the lower-triangular B (integer representatives) to t.
TorsionTuple transform(std::uint32_t p, const std::vector<unsigned>& sigma,
                       const std::vector<std::vector<mpz_class>>& B, const TorsionTuple& t)
{
    const auto n = sigma.size();
    TorsionTuple r(n);
    for (std::size_t i = 0; i < n; ++i) {
        TorsionPoint acc = t[sigma[i]];
        for (std::size_t j = 0; j < i; ++j)
            if (B[i][j] != 0)
                acc = torsion_add(p, acc, torsion_scale(p, t[sigma[j]], B[i][j]));
        r[i] = acc;
    }
    return r;
}

// Indices of the deepest third of the tuples by the level of coordinate c.
std::vector<std::size_t> deepest_third(const std::vector<TorsionTuple>& ys, unsigned c)
{
    std::vector<std::size_t> idx(ys.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return ys[a][c].level > ys[b][c].level; });
    idx.resize(std::max<std::size_t>(1, (ys.size() + 2) / 3));
    return idx;
}

} // namespace

// ---------------------------------------------------------------------------

TranslateCheck verify_subtorus_translate(const GroupPtr& group, std::span<const MultiSeries> generators,
                                         std::span<const PadicApprox> exponents, const TorsionTuple& translate)
{
    if (generators.empty())
        throw DomainError("no generators to verify");
    const unsigned n = generators[0].nvars();
    if (exponents.size() != n || translate.size() != n)
        throw MismatchError("parametrization has " + std::to_string(exponents.size()) + " exponents and " +
                            std::to_string(translate.size()) + " translate coordinates for " + std::to_string(n) +
                            " variables");
    const unsigned K = tuple_level(translate);
    const RingPtr R = group->ring(K);
    const unsigned D = generators[0].degree_bound();
    Rational ceiling(R->precision());

    std::vector<MultiSeries> g;
    for (unsigned i = 0; i < n; ++i) {
        RingElement z = group->embed(translate[i], K);
        ceiling = min(ceiling, z.ceiling());
        MultiSeries gi(R, 1, D);
        if (group->kind() == GroupKind::multiplicative) {
            MultiSeries b = binomial_series(exponents[i], D, R);
            gi = b.scaled(RingElement::one(R) + z) - MultiSeries::constant(R, 1, D, 1);
        } else {
            MultiSeries br = into_ring(group->lt()->bracket(exponents[i]).truncated(D), R);
            if (z.is_zero()) {
                gi = br;
            } else {
                MultiSeries L = into_ring(group->law(), R);
                MultiSeries cz(R, 1, D);
                cz.set_term(0, z);
                std::vector<MultiSeries> args{cz, br};
                SubstitutionResult sr = substitute_with_constants(L, args);
                ceiling = min(ceiling, sr.ceiling);
                gi = sr.series;
            }
        }
        g.push_back(std::move(gi));
    }

    std::vector<MultiSeries> results;
    for (const auto& phi : generators) {
        SubstitutionResult sr = substitute_with_constants(into_ring(phi, R), g);
        ceiling = min(ceiling, sr.ceiling);
        results.push_back(std::move(sr.series));
    }

    TranslateCheck check;
    check.required = ceiling;
    check.residual = ValuationRat::at_least(ceiling);
    for (const auto& s : results)
        for (const auto& [m, c] : s.terms())
            check.residual = min(check.residual, element_valuation(c.with_ceiling(min(c.ceiling(), ceiling))));
    check.contains = ceiling > Rational(0) && check.residual.at_least_as(check.required) == Decision::above;
    return check;
}

// ---------------------------------------------------------------------------

DetectionResult detect_binomial_relation(const GroupPtr& group, const MultiSeries& phi, unsigned K)
{
    ScanOptions opts;
    opts.level = K;
    ScanReport report = scan(group, std::span<const MultiSeries>(&phi, 1), opts);
    return detect_binomial_relation(group, phi, report);
}

DetectionResult detect_binomial_relation(const GroupPtr& group, const MultiSeries& phi, const ScanReport& scan)
{
    DetectionResult result;
    const std::uint32_t p = group->prime();
    const unsigned K = scan.level;
    if (phi.nvars() != 2 || scan.nvars != 2) {
        result.diagnostic = "binomial relations need exactly two variables";
        return result;
    }
    if (!scan.exhaustive || K == 0) {
        result.diagnostic = "binomial detection needs an exhaustive scan of level >= 1";
        return result;
    }

    std::vector<const TorsionTuple*> zeros;
    for (const auto& e : scan.entries)
        if (e.is_zero())
            zeros.push_back(&e.tuple);

    const std::uint64_t points = prime_power(p, K).get_ui();
    const int N = phi.ring()->precision();
    const int prec = lift_precision(group, N, phi.degree_bound());
    const mpz_class modK = prime_power(p, K);
    std::vector<std::string> notes;

    for (unsigned a : {0u, 1u}) {
        const unsigned b = 1 - a;
        const std::string orient = a == 0 ? "Y = xi0 (+) [m](X)" : "X = xi0 (+) [m](Y)";
        std::map<TorsionPoint, std::vector<TorsionPoint>> partners;
        for (const auto* z : zeros)
            partners[(*z)[a]].push_back((*z)[b]);
        std::size_t bad = points - partners.size();
        for (const auto& [pt, list] : partners)
            if (list.size() != 1)
                ++bad;
        if (bad != 0) {
            notes.push_back(orient + ": " + std::to_string(bad) + " of " + std::to_string(points) +
                            " points lack a unique zero partner");
            continue;
        }

        const TorsionPoint xi0 = partners.at(TorsionPoint::origin())[0];
        const TorsionPoint zeta{K, 1};
        const TorsionPoint d = torsion_add(p, partners.at(zeta)[0], torsion_neg(p, xi0));
        const mpz_class m = d.exponent * prime_power(p, K - d.level) % modK;

        std::optional<unsigned> conflict;
        for (const auto& [pt, list] : partners) {
            if (torsion_add(p, xi0, torsion_scale(p, pt, m)) != list[0]) {
                conflict = pt.level;
                break;
            }
        }
        if (conflict) {
            notes.push_back(orient + ": exponents incompatible at level " + std::to_string(*conflict));
            continue;
        }

        TorsionTuple translate(2);
        translate[b] = xi0;
        for (const mpz_class& lift : {m, mpz_class(m - modK)}) {
            std::vector<PadicApprox> e(2, PadicApprox(p, prec, 1));
            e[b] = PadicApprox(p, prec, lift);
            TranslateCheck check = verify_subtorus_translate(group, std::span<const MultiSeries>(&phi, 1), e,
                                                             translate);
            if (!check.contains)
                continue;
            SpecialWitness w;
            w.kind = WitnessKind::binomial_relation;
            w.exponents.assign(2, PadicApprox(p, static_cast<int>(K), 1));
            w.exponents[b] = PadicApprox(p, static_cast<int>(K), m);
            w.lifts.assign(2, mpz_class(1));
            w.lifts[b] = lift;
            w.translate = translate;
            w.parameter = a;
            w.residual = check.residual;
            w.required = check.required;
            result.witness = std::move(w);
            return result;
        }
        notes.push_back(orient + ": torsion zeros fit m = " + m.get_str() + " mod p^" + std::to_string(K) +
                        " but neither lift verifies");
    }
    for (std::size_t i = 0; i < notes.size(); ++i)
        result.diagnostic += (i ? "; " : "") + notes[i];
    return result;
}

// ---------------------------------------------------------------------------

NormalizedSequence normalize_sequence(std::uint32_t p, std::span<const TorsionTuple> tuples)
{
    if (tuples.empty())
        throw DomainError("normalize_sequence needs at least one tuple");
    const auto n = static_cast<unsigned>(tuples[0].size());
    for (const auto& t : tuples)
        if (t.size() != n)
            throw MismatchError("tuples have different lengths");

    NormalizedSequence res;
    res.cv = ChangeOfVariables(n);
    res.limits.assign(n, std::nullopt);
    res.finite_projection.assign(n, false);
    res.normalized.assign(tuples.begin(), tuples.end());
    res.chains.assign(tuples.size(), std::vector<std::optional<PadicApprox>>(n));
    if (n == 1) {
        res.diagnostic = "single coordinate; nothing to normalize";
        return res;
    }

    std::map<std::vector<unsigned>, std::size_t> votes;
    for (const auto& t : tuples) {
        std::vector<unsigned> perm(n);
        std::iota(perm.begin(), perm.end(), 0u);
        std::stable_sort(perm.begin(), perm.end(), [&](unsigned a, unsigned b) { return t[a].level > t[b].level; });
        ++votes[perm];
    }
    auto best = votes.begin();
    for (auto it = votes.begin(); it != votes.end(); ++it)
        if (it->second > best->second)
            best = it;
    const std::vector<unsigned> sigma = best->first;

    std::vector<std::vector<mpz_class>> B(n, std::vector<mpz_class>(n));
    std::vector<TorsionTuple> ys;
    for (const auto& t : tuples)
        ys.push_back(transform(p, sigma, B, t));

    const auto deep0 = deepest_third(ys, 0);
    unsigned j0 = ys[deep0.back()][0].level;
    if (j0 == 0) {
        res.diagnostic = "deepest tuples have a trivial leading coordinate; too shallow to estimate limits";
        return res;
    }
    for (std::size_t t = 0; t < ys.size(); ++t)
        for (unsigned i = 1; i < n; ++i)
            if (auto P = chain_exponent(p, ys[t][0], ys[t][i]))
                res.chains[t][i] = PadicApprox(p, static_cast<int>(ys[t][0].level), *P);

    int modulus = static_cast<int>(j0);
    std::vector<std::string> notes;
    for (unsigned c = 0; c + 1 < n; ++c) {
        for (std::size_t t = 0; t < tuples.size(); ++t)
            ys[t] = transform(p, sigma, B, tuples[t]);
        const auto deep = deepest_third(ys, c);
        const unsigned jc = ys[deep.back()][c].level;
        if (jc == 0)
            break;
        const mpz_class modc = prime_power(p, jc);
        for (unsigned i = c + 1; i < n; ++i) {
            unsigned max_level = 0;
            for (const auto& y : ys)
                max_level = std::max(max_level, y[i].level);
            if (max_level < jc)
                continue; // bounded orders: the finite branch
            std::vector<mpz_class> residues;
            for (std::size_t t : deep)
                if (auto P = chain_exponent(p, ys[t][c], ys[t][i]))
                    residues.push_back(*P % modc);
            if (residues.empty())
                continue;
            bool tied = false;
            const mpz_class A = majority(residues, tied);
            if (tied)
                notes.push_back("tie in coordinate " + std::to_string(i) + " residues mod " + modc.get_str() +
                                " broken toward " + A.get_str());
            if (c == 0)
                res.limits[i] = PadicApprox(p, static_cast<int>(jc), A);
            modulus = std::min(modulus, static_cast<int>(jc));
            for (unsigned j = 0; j < c; ++j)
                B[i][j] -= A * B[c][j];
            B[i][c] -= A;
        }
    }

    ChangeOfVariables cv(sigma);
    const mpz_class mod = prime_power(p, static_cast<unsigned>(modulus));
    for (unsigned i = 1; i < n; ++i)
        for (unsigned j = 0; j < i; ++j) {
            // The normalized tuples use the symmetric lift, so a limit such as
            // -3 acts as -3 at every level.
            PadicApprox v(p, modulus, B[i][j]);
            B[i][j] = v.symmetric_value();
            if (!v.is_zero())
                cv.set_entry(i, j, v);
        }
    res.cv = cv;
    for (std::size_t t = 0; t < tuples.size(); ++t)
        res.normalized[t] = transform(p, sigma, B, tuples[t]);

    unsigned lead = 0;
    for (const auto& y : res.normalized)
        lead = std::max(lead, y[0].level);
    for (unsigned i = 1; i < n; ++i) {
        unsigned m = 0;
        for (const auto& y : res.normalized)
            m = std::max(m, y[i].level);
        res.finite_projection[i] = m < lead;
    }
    if (votes.size() > 1)
        notes.insert(notes.begin(),
                     "coordinate order chosen by majority over " + std::to_string(votes.size()) + " orderings");
    for (const auto& note : notes)
        res.diagnostic += (res.diagnostic.empty() ? "" : "; ") + note;
    return res;
}

// ---------------------------------------------------------------------------

namespace {

// Rank-one translate read off the deepest zeros: normalize the differences
// t - t0 against a zero t0 of minimal level, then verify.
std::optional<SpecialWitness> detect_translate(const GroupPtr& group, std::span<const MultiSeries> generators,
                                               const ScanReport& scan, std::vector<std::string>& diagnostics)
{
    const std::uint32_t p = group->prime();
    const unsigned n = scan.nvars;
    const ScanEntry* t0 = nullptr;
    for (const auto& e : scan.entries)
        if (e.is_zero() && (!t0 || e.level < t0->level))
            t0 = &e;
    std::vector<TorsionTuple> diffs;
    for (const auto& e : scan.entries) {
        if (!e.is_zero() || e.level != scan.level)
            continue;
        TorsionTuple d(n);
        for (unsigned i = 0; i < n; ++i)
            d[i] = torsion_add(p, e.tuple[i], torsion_neg(p, t0->tuple[i]));
        diffs.push_back(std::move(d));
    }
    if (!t0 || diffs.empty())
        return std::nullopt;

    NormalizedSequence ns = normalize_sequence(p, diffs);
    if (!ns.diagnostic.empty())
        diagnostics.push_back("normalize: " + ns.diagnostic);
    const auto& sigma = ns.cv.permutation();
    int modulus = std::min(static_cast<int>(scan.level), ns.cv.min_entry_precision());
    if (modulus < 1) {
        diagnostics.push_back("translate: no usable exponent precision");
        return std::nullopt;
    }
    const mpz_class mod = prime_power(p, static_cast<unsigned>(modulus));

    // Normalized coordinates vanish on the translate: t_sigma(i) = -sum B_ij t_sigma(j).
    std::vector<mpz_class> Nv(n);
    Nv[sigma[0]] = 1;
    for (unsigned i = 1; i < n; ++i) {
        mpz_class acc = 0;
        for (unsigned j = 0; j < i; ++j)
            if (const auto& b = ns.cv.entry(i, j))
                acc -= b->value() * Nv[sigma[j]];
        mpz_fdiv_r(acc.get_mpz_t(), acc.get_mpz_t(), mod.get_mpz_t());
        Nv[sigma[i]] = acc;
    }
    TorsionTuple zeta0(n);
    for (unsigned i = 0; i < n; ++i)
        zeta0[i] = torsion_add(p, t0->tuple[i], torsion_neg(p, torsion_scale(p, t0->tuple[sigma[0]], Nv[i])));

    const int N = generators[0].ring()->precision();
    const int prec = lift_precision(group, N, generators[0].degree_bound());
    std::vector<unsigned> free;
    for (unsigned i = 0; i < n; ++i)
        if (i != sigma[0] && Nv[i] != 0)
            free.push_back(i);
    const unsigned combos = 1u << std::min<std::size_t>(free.size(), 4);
    for (unsigned mask = 0; mask < combos; ++mask) {
        std::vector<mpz_class> lifts = Nv;
        for (std::size_t f = 0; f < free.size(); ++f)
            if (f < 4 && ((mask >> f) & 1u))
                lifts[free[f]] -= mod;
        std::vector<PadicApprox> e;
        for (const auto& l : lifts)
            e.push_back(PadicApprox(p, prec, l));
        TranslateCheck check = verify_subtorus_translate(group, generators, e, zeta0);
        if (!check.contains)
            continue;
        SpecialWitness w;
        w.kind = WitnessKind::subtorus_translate;
        for (const auto& v : Nv)
            w.exponents.push_back(PadicApprox(p, modulus, v));
        w.lifts = lifts;
        w.translate = zeta0;
        w.parameter = sigma[0];
        w.residual = check.residual;
        w.required = check.required;
        return w;
    }
    diagnostics.push_back("translate: candidate " + tuple_str(zeta0) + " with exponents mod p^" +
                          std::to_string(modulus) + " does not verify");
    return std::nullopt;
}

} // namespace

DichotomyReport dichotomy_report(const GroupPtr& group, std::span<const MultiSeries> generators,
                                 const DichotomyOptions& options)
{
    DichotomyReport report;
    report.level = options.level;
    report.precision = generators.empty() ? 0 : generators[0].ring()->precision();
    report.degree_bound = generators.empty() ? 0 : generators[0].degree_bound();

    ScanOptions so;
    so.level = options.level;
    so.mode = options.mode;
    so.threads = options.threads;
    report.scan = scan(group, generators, so);
    const ScanReport& sr = report.scan;

    bool zeros_everywhere = options.level >= 1;
    for (unsigned k = 1; k <= options.level; ++k)
        if (sr.profile[k].zeros == 0)
            zeros_everywhere = false;

    if (zeros_everywhere && sr.exhaustive) {
        if (sr.nvars == 2 && generators.size() == 1) {
            DetectionResult d = detect_binomial_relation(group, generators[0], sr);
            if (d.witness) {
                report.outcome = Outcome::special_found;
                report.witness = std::move(d.witness);
                return report;
            }
            report.diagnostics.push_back("binomial: " + d.diagnostic);
        }
        if (auto w = detect_translate(group, generators, sr, report.diagnostics)) {
            report.outcome = Outcome::special_found;
            report.witness = std::move(w);
            return report;
        }
    } else if (zeros_everywhere) {
        report.diagnostics.push_back("special detection skipped: sampled scan");
    }

    // C is the largest certified value among non-zero tuples of positive
    // level; the exception set is whatever is certified above it.
    std::optional<Rational> C;
    for (const auto& e : sr.entries)
        if (e.level >= 1 && !e.is_zero() && e.min_value.is_exact())
            if (!C || e.min_value.value() > *C)
                C = e.min_value.value();
    if (!C) {
        C = Rational(0);
        report.diagnostics.push_back("no certified non-zero values at positive level; constant set to 0");
    }
    report.outcome = Outcome::bounded_below;
    report.constant = *C;
    for (const auto& e : sr.entries) {
        switch (e.min_value.above(*C)) {
        case Decision::above:
            report.exceptions.push_back(e.tuple);
            break;
        case Decision::undecided:
            report.undecided.push_back(e.tuple);
            break;
        case Decision::not_above:
            break;
        }
    }
    return report;
}

} // namespace prig
