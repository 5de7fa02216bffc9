// Copyright 2026 The prig Authors
// SPDX-License-Identifier: Apache-2.0

#include "prig/torsion.hpp"

#include <algorithm>
#include <charconv>
#include <random>
#include <set>
#include <thread>

namespace prig {

TorsionPoint TorsionPoint::from_fraction(std::uint32_t p, unsigned level, const mpz_class& value)
{
    const mpz_class mod = prime_power(p, level);
    mpz_class u;
    mpz_fdiv_r(u.get_mpz_t(), value.get_mpz_t(), mod.get_mpz_t());
    if (u == 0)
        return origin();
    while (level > 0 && mpz_divisible_ui_p(u.get_mpz_t(), p)) {
        mpz_divexact_ui(u.get_mpz_t(), u.get_mpz_t(), p);
        --level;
    }
    return {level, u};
}

TorsionPoint TorsionPoint::parse(std::uint32_t p, std::string_view text)
{
    auto colon = text.find(':');
    if (colon == std::string_view::npos)
        throw DomainError("torsion point '" + std::string(text) + "' is not of the form level:exponent");
    unsigned level = 0;
    auto lv = text.substr(0, colon);
    auto [ptr, ec] = std::from_chars(lv.data(), lv.data() + lv.size(), level);
    if (ec != std::errc() || ptr != lv.data() + lv.size())
        throw DomainError("bad torsion level in '" + std::string(text) + "'");
    mpz_class u;
    if (u.set_str(std::string(text.substr(colon + 1)), 10) != 0)
        throw DomainError("bad torsion exponent in '" + std::string(text) + "'");
    if (level == 0) {
        if (u != 0)
            throw DomainError("the level-0 point is the origin 0:0");
        return origin();
    }
    if (u <= 0 || u >= prime_power(p, level) || mpz_divisible_ui_p(u.get_mpz_t(), p))
        throw DomainError("torsion exponent in '" + std::string(text) + "' must be a unit in [1, p^level)");
    return {level, u};
}

std::string TorsionPoint::str() const
{
    return std::to_string(level) + ":" + exponent.get_str();
}

TorsionPoint torsion_add(std::uint32_t p, const TorsionPoint& a, const TorsionPoint& b)
{
    const unsigned k = std::max(a.level, b.level);
    mpz_class v = a.exponent * prime_power(p, k - a.level) + b.exponent * prime_power(p, k - b.level);
    return TorsionPoint::from_fraction(p, k, v);
}

TorsionPoint torsion_neg(std::uint32_t p, const TorsionPoint& a)
{
    return TorsionPoint::from_fraction(p, a.level, -a.exponent);
}

TorsionPoint torsion_scale(std::uint32_t p, const TorsionPoint& a, const mpz_class& c)
{
    return TorsionPoint::from_fraction(p, a.level, a.exponent * c);
}

std::string tuple_str(const TorsionTuple& t)
{
    std::string s;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i)
            s += ',';
        s += t[i].str();
    }
    return s;
}

TorsionTuple parse_tuple(std::uint32_t p, std::string_view text)
{
    TorsionTuple t;
    while (true) {
        auto comma = text.find(',');
        t.push_back(TorsionPoint::parse(p, text.substr(0, comma)));
        if (comma == std::string_view::npos)
            break;
        text.remove_prefix(comma + 1);
    }
    return t;
}

unsigned tuple_level(const TorsionTuple& t)
{
    unsigned k = 0;
    for (const auto& x : t)
        k = std::max(k, x.level);
    return k;
}

// ---------------------------------------------------------------------------

TorsionGroup::TorsionGroup(GroupKind kind, std::uint32_t p, int precision, unsigned degree_bound,
                           std::shared_ptr<const LTGroup> lt) :
    kind_(kind), p_(p), precision_(precision), degree_bound_(degree_bound), lt_(std::move(lt))
{
}

GroupPtr TorsionGroup::multiplicative(std::uint32_t p, int precision, unsigned degree_bound)
{
    if (!is_prime(p))
        throw DomainError("p = " + std::to_string(p) + " is not prime");
    if (precision < 1 || degree_bound < 1)
        throw DomainError("precision and degree bound must be positive");
    return GroupPtr(new TorsionGroup(GroupKind::multiplicative, p, precision, degree_bound, nullptr));
}

GroupPtr TorsionGroup::lubin_tate(std::shared_ptr<const LTGroup> group)
{
    const auto p = group->prime();
    const auto N = group->precision();
    const auto D = group->degree_bound();
    return GroupPtr(new TorsionGroup(GroupKind::lubin_tate, p, N, D, std::move(group)));
}

std::string TorsionGroup::name() const
{
    return kind_ == GroupKind::multiplicative ? "multiplicative" : "lubin-tate:" + lt_->params().name();
}

RingPtr TorsionGroup::ring(unsigned level) const
{
    if (kind_ == GroupKind::lubin_tate)
        return lt_->torsion_ring(level);
    std::lock_guard lock(mutex_);
    auto it = rings_.find(level);
    if (it == rings_.end())
        it = rings_.emplace(level, EisensteinRing::cyclotomic(p_, level, precision_)).first;
    return it->second;
}

RingElement TorsionGroup::embed(const TorsionPoint& t, unsigned K) const
{
    if (t.level > K)
        throw DomainError("torsion point of level " + std::to_string(t.level) + " does not embed at level " +
                          std::to_string(K));
    const auto key = std::make_pair(K, t);
    {
        std::lock_guard lock(mutex_);
        auto it = points_.find(key);
        if (it != points_.end())
            return it->second;
    }
    RingPtr R = ring(K);
    RingElement value(R);
    if (!t.is_origin()) {
        const mpz_class a = t.exponent * prime_power(p_, K - t.level);
        RingElement lambda = RingElement::uniformizer(R);
        if (kind_ == GroupKind::multiplicative) {
            value = (RingElement::one(R) + lambda).pow(a) - RingElement::one(R);
        } else {
            MultiSeries br = lt_->bracket(a);
            value = evaluate(br, std::span<const RingElement>(&lambda, 1));
        }
    }
    std::lock_guard lock(mutex_);
    return points_.emplace(key, std::move(value)).first->second;
}

std::vector<RingElement> TorsionGroup::embed(const TorsionTuple& t, unsigned K) const
{
    std::vector<RingElement> r;
    r.reserve(t.size());
    for (const auto& x : t)
        r.push_back(embed(x, K));
    return r;
}

MultiSeries TorsionGroup::law() const
{
    if (kind_ == GroupKind::lubin_tate)
        return lt_->law();
    RingPtr R = EisensteinRing::base(p_, precision_);
    MultiSeries L(R, 2, degree_bound_, true);
    L.set_term(unit_monomial(0), RingElement::one(R));
    L.set_term(unit_monomial(1), RingElement::one(R));
    if (degree_bound_ >= 2)
        L.set_term(unit_monomial(0) + unit_monomial(1), RingElement::one(R));
    else
        L.set_polynomial(false);
    return L;
}

MultiSeries TorsionGroup::endomorphism(const mpz_class& a) const
{
    if (kind_ == GroupKind::lubin_tate)
        return lt_->bracket(a);
    RingPtr R = EisensteinRing::base(p_, precision_);
    PadicApprox m(p_, binomial_exponent_precision(p_, precision_, degree_bound_), a);
    MultiSeries s = binomial_series(m, degree_bound_, R);
    s.set_term(0, RingElement(R));
    return s;
}

MultiSeries TorsionGroup::change_of_vars(const MultiSeries& phi, const ChangeOfVariables& cv) const
{
    if (kind_ == GroupKind::multiplicative)
        return mult_change_of_vars(phi, cv);
    const unsigned n = phi.nvars();
    if (cv.nvars() != n)
        throw MismatchError("change of variables and series have different variable counts");
    const MultiSeries law = lt_->law().with_precision(phi.ring()->precision());
    MultiSeries L(law.ring(), 2, phi.degree_bound());
    for (const auto& [m, c] : law.terms())
        L.set_term(m, c);
    const auto& perm = cv.permutation();
    std::vector<MultiSeries> g;
    for (unsigned i = 0; i < n; ++i) {
        MultiSeries acc = MultiSeries::variable(L.ring(), n, phi.degree_bound(), perm[i]);
        for (unsigned j = 0; j < i; ++j) {
            const auto& b = cv.entry(i, j);
            if (!b || b->is_zero())
                continue;
            MultiSeries br = lt_->bracket(*b).with_precision(phi.ring()->precision());
            MultiSeries h(L.ring(), n, phi.degree_bound());
            for (const auto& [m, c] : br.terms())
                h.set_term(m << (8 * perm[j]), c);
            std::vector<MultiSeries> args{acc, h};
            acc = substitute(L, args);
        }
        g.push_back(std::move(acc));
    }
    return substitute(phi, g);
}

// ---------------------------------------------------------------------------

namespace {

std::uint64_t checked_power(std::uint32_t p, unsigned k)
{
    mpz_class v = prime_power(p, k);
    if (!v.fits_ulong_p() || v > mpz_class(static_cast<unsigned long>(1) << 62))
        throw DomainError("p^K too large to enumerate");
    return v.get_ui();
}

TorsionTuple tuple_from_digits(std::uint32_t p, unsigned K, std::span<const std::uint64_t> digits)
{
    TorsionTuple t;
    t.reserve(digits.size());
    for (auto d : digits)
        t.push_back(TorsionPoint::from_fraction(p, K, mpz_class(static_cast<unsigned long>(d))));
    return t;
}

} // namespace

std::vector<TorsionTuple> enumerate_torsion(std::uint32_t p, unsigned K, unsigned n, const EnumerationMode& mode)
{
    if (n == 0 || n > kMaxVars)
        throw DomainError("tuple length must be between 1 and 8");
    const std::uint64_t side = checked_power(p, K);
    const mpz_class total = prime_power(p, K * n);

    std::vector<TorsionTuple> out;
    std::vector<std::uint64_t> digits(n, 0);
    if (mode.exhaustive) {
        if (total > mpz_class(static_cast<unsigned long>(mode.cap)))
            return enumerate_torsion(p, K, n, EnumerationMode::sample(mode.cap, mode.seed));
        const std::uint64_t count = total.get_ui();
        out.reserve(count);
        for (std::uint64_t i = 0; i < count; ++i) {
            std::uint64_t r = i;
            for (unsigned j = n; j-- > 0;) {
                digits[j] = r % side;
                r /= side;
            }
            out.push_back(tuple_from_digits(p, K, digits));
        }
        return out;
    }

    if (total <= mpz_class(static_cast<unsigned long>(mode.count)))
        return enumerate_torsion(p, K, n, EnumerationMode::all(mode.count));
    std::mt19937_64 rng(mode.seed);
    std::uniform_int_distribution<std::uint64_t> dist(0, side - 1);
    std::set<std::vector<std::uint64_t>> picked;
    while (picked.size() < mode.count) {
        for (auto& d : digits)
            d = dist(rng);
        picked.insert(digits);
    }
    out.reserve(picked.size());
    for (const auto& d : picked)
        out.push_back(tuple_from_digits(p, K, d));
    return out;
}

// ---------------------------------------------------------------------------

bool ScanEntry::is_zero() const
{
    return std::all_of(values.begin(), values.end(), [](const ValuationRat& v) { return v.is_lower_bound(); });
}

std::size_t ScanReport::zero_count(unsigned max_level) const
{
    std::size_t c = 0;
    for (const auto& lp : profile)
        if (lp.level <= max_level)
            c += lp.zeros;
    return c;
}

std::size_t ScanReport::undecided_count() const
{
    std::size_t c = 0;
    for (const auto& lp : profile)
        c += lp.undecided;
    return c;
}

ScanReport scan(const GroupPtr& group, std::span<const MultiSeries> generators, const ScanOptions& options)
{
    if (generators.empty())
        throw DomainError("scan needs at least one generator");
    const unsigned n = generators[0].nvars();
    for (const auto& g : generators)
        if (g.nvars() != n)
            throw MismatchError("generators have different variable counts");
    const std::uint32_t p = group->prime();
    const unsigned K = options.level;

    ScanReport report;
    report.p = p;
    report.nvars = n;
    report.level = K;
    report.group = group->name();

    std::vector<TorsionTuple> tuples = enumerate_torsion(p, K, n, options.mode);
    // Sampling that happened to cover every tuple still counts as exhaustive.
    report.exhaustive = mpz_class(static_cast<unsigned long>(tuples.size())) == prime_power(p, K * n);

    // Embed every point up front so workers only read the cache.
    const std::uint64_t side = prime_power(p, K).get_ui();
    for (std::uint64_t i = 0; i < side; ++i)
        group->embed(TorsionPoint::from_fraction(p, K, mpz_class(static_cast<unsigned long>(i))), K);

    report.entries.resize(tuples.size());
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            ScanEntry& e = report.entries[i];
            e.tuple = std::move(tuples[i]);
            e.level = tuple_level(e.tuple);
            std::vector<RingElement> pt = group->embed(e.tuple, K);
            e.ceiling = Rational(group->precision());
            bool first = true;
            for (const auto& g : generators) {
                RingElement v = evaluate(g, pt);
                ValuationRat val = element_valuation(v);
                e.ceiling = min(e.ceiling, v.ceiling());
                e.values.push_back(val);
                e.min_value = first ? val : min(e.min_value, val);
                first = false;
            }
        }
    };

    unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, tuples.size() / 16)));
    if (threads <= 1) {
        work(0, tuples.size());
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(threads);
        const std::size_t chunk = (tuples.size() + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::size_t b = std::min(tuples.size(), t * chunk);
            const std::size_t e = std::min(tuples.size(), b + chunk);
            pool.emplace_back([&, t, b, e] {
                try {
                    work(b, e);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
        for (auto& th : pool)
            th.join();
        for (auto& err : errors)
            if (err)
                std::rethrow_exception(err);
    }

    for (const auto& thr : options.thresholds) {
        ThresholdSet s{thr, {}, {}};
        for (std::size_t i = 0; i < report.entries.size(); ++i) {
            switch (report.entries[i].min_value.above(thr)) {
            case Decision::above:
                s.members.push_back(i);
                break;
            case Decision::undecided:
                s.undecided.push_back(i);
                break;
            case Decision::not_above:
                break;
            }
        }
        report.sets.push_back(std::move(s));
    }

    report.profile.resize(K + 1);
    for (unsigned k = 0; k <= K; ++k)
        report.profile[k].level = k;
    for (std::size_t i = 0; i < report.entries.size(); ++i) {
        const ScanEntry& e = report.entries[i];
        LevelProfile& lp = report.profile[e.level];
        ++lp.tuples;
        if (e.is_zero()) {
            ++lp.zeros;
            continue;
        }
        if (!e.min_value.is_exact()) {
            ++lp.undecided;
            continue;
        }
        const Rational& v = e.min_value.value();
        if (!lp.max_value || v > *lp.max_value) {
            lp.max_value = v;
            lp.argmax.assign(1, i);
        } else if (v == *lp.max_value) {
            lp.argmax.push_back(i);
        }
    }
    return report;
}

// ---------------------------------------------------------------------------

TorsionTuple action_on_torsion(std::uint32_t p, const ChangeOfVariables& cv, const TorsionTuple& t)
{
    const unsigned n = cv.nvars();
    if (t.size() != n)
        throw MismatchError("tuple length does not match the change of variables");
    const auto& perm = cv.permutation();
    TorsionTuple r(n);
    for (unsigned i = 0; i < n; ++i) {
        TorsionPoint acc = t[perm[i]];
        for (unsigned j = 0; j < i; ++j) {
            const auto& b = cv.entry(i, j);
            if (!b)
                continue;
            const TorsionPoint& x = t[perm[j]];
            if (b->prime() != p)
                throw MismatchError("change-of-variables entry has a different prime");
            if (static_cast<unsigned>(b->precision()) < x.level)
                throw PrecisionError("entry known mod p^" + std::to_string(b->precision()) +
                                     " cannot act on a level-" + std::to_string(x.level) + " point");
            acc = torsion_add(p, acc, torsion_scale(p, x, b->value()));
        }
        r[i] = acc;
    }
    return r;
}

FrobeniusCheck frobenius_congruence_check(const GroupPtr& group, const MultiSeries& phi, const TorsionTuple& t,
                                          unsigned K)
{
    const std::uint32_t p = group->prime();
    TorsionTuple pt;
    for (const auto& x : t)
        pt.push_back(torsion_scale(p, x, p));
    RingElement lhs = evaluate(phi, group->embed(pt, K));
    RingElement rhs = evaluate(phi, group->embed(t, K)).pow(p);
    ValuationRat d = element_valuation(lhs - rhs);
    Rational bound = phi.ring()->uniformizer_valuation();
    return {d, bound, d.at_least_as(bound)};
}

} // namespace prig
