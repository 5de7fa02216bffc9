// Copyright 2026 The prig Authors
// SPDX-License-Identifier: Apache-2.0

#include "prig/series.hpp"

#include <algorithm>
#include <numeric>

namespace prig {

Monomial make_monomial(std::span<const unsigned> exps)
{
    if (exps.size() > kMaxVars)
        throw DomainError("at most " + std::to_string(kMaxVars) + " variables are supported");
    Monomial m = 0;
    unsigned total = 0;
    for (std::size_t i = 0; i < exps.size(); ++i) {
        total += exps[i];
        if (total > kMaxDegree)
            throw DomainError("monomial total degree exceeds " + std::to_string(kMaxDegree));
        m |= Monomial{exps[i]} << (8 * i);
    }
    return m;
}

unsigned exponent(Monomial m, unsigned var)
{
    return static_cast<unsigned>((m >> (8 * var)) & 0xff);
}

unsigned total_degree(Monomial m)
{
    unsigned d = 0;
    for (; m != 0; m >>= 8)
        d += static_cast<unsigned>(m & 0xff);
    return d;
}

std::vector<unsigned> exponents(Monomial m, unsigned nvars)
{
    std::vector<unsigned> e(nvars);
    for (unsigned i = 0; i < nvars; ++i)
        e[i] = exponent(m, i);
    return e;
}

namespace {

// Coefficient of a series term lifted into `target` (base-ring coefficients
// embed into any extension).
RingElement coerce(const RingElement& c, const RingPtr& target)
{
    if (same_ring(c.ring(), target))
        return c;
    return c.lift_to(target);
}

} // namespace

// ---------------------------------------------------------------------------

MultiSeries::MultiSeries(RingPtr ring, unsigned nvars, unsigned degree_bound, bool polynomial) :
    ring_(std::move(ring)), nvars_(nvars), degree_bound_(degree_bound), polynomial_(polynomial)
{
    if (nvars_ == 0 || nvars_ > kMaxVars)
        throw DomainError("series must have between 1 and " + std::to_string(kMaxVars) + " variables");
    if (degree_bound_ > kMaxDegree)
        throw DomainError("degree bound exceeds " + std::to_string(kMaxDegree));
}

MultiSeries MultiSeries::constant(RingPtr ring, unsigned nvars, unsigned degree_bound, const mpz_class& c)
{
    MultiSeries s(ring, nvars, degree_bound, true);
    s.set_term(0, RingElement::from_integer(ring, c));
    return s;
}

MultiSeries MultiSeries::variable(RingPtr ring, unsigned nvars, unsigned degree_bound, unsigned var)
{
    if (var >= nvars)
        throw DomainError("variable index out of range");
    MultiSeries s(ring, nvars, degree_bound, true);
    if (degree_bound >= 1)
        s.set_term(unit_monomial(var), RingElement::one(ring));
    else
        s.polynomial_ = false;
    return s;
}

RingElement MultiSeries::coefficient(Monomial m) const
{
    auto it = terms_.find(m);
    if (it == terms_.end())
        return RingElement(ring_);
    return it->second;
}

void MultiSeries::set_term(Monomial m, const RingElement& c)
{
    if (total_degree(m) > degree_bound_)
        return;
    for (unsigned v = nvars_; v < kMaxVars; ++v)
        if (exponent(m, v) != 0)
            throw DomainError("monomial uses a variable beyond the series' arity");
    RingElement cc = coerce(c, ring_);
    if (cc.is_zero())
        terms_.erase(m);
    else
        terms_.insert_or_assign(m, std::move(cc));
}

void MultiSeries::add_term(Monomial m, const RingElement& c)
{
    if (total_degree(m) > degree_bound_)
        return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        set_term(m, c);
        return;
    }
    it->second += coerce(c, ring_);
    if (it->second.is_zero())
        terms_.erase(it);
}

unsigned MultiSeries::max_degree() const
{
    unsigned d = 0;
    for (const auto& [m, c] : terms_)
        d = std::max(d, total_degree(m));
    return d;
}

void MultiSeries::check_compatible(const MultiSeries& o) const
{
    if (nvars_ != o.nvars_ || degree_bound_ != o.degree_bound_)
        throw MismatchError("series shapes differ (vars " + std::to_string(nvars_) + "/" +
                            std::to_string(o.nvars_) + ", degree " + std::to_string(degree_bound_) + "/" +
                            std::to_string(o.degree_bound_) + ")");
    if (!same_ring(ring_, o.ring_))
        throw MismatchError("series over different coefficient rings");
}

MultiSeries MultiSeries::operator+(const MultiSeries& o) const
{
    check_compatible(o);
    MultiSeries r = *this;
    r.polynomial_ = polynomial_ && o.polynomial_;
    for (const auto& [m, c] : o.terms_)
        r.add_term(m, c);
    return r;
}

MultiSeries MultiSeries::operator-(const MultiSeries& o) const
{
    return *this + (-o);
}

MultiSeries MultiSeries::operator-() const
{
    MultiSeries r = *this;
    for (auto& [m, c] : r.terms_)
        c = -c;
    return r;
}

MultiSeries MultiSeries::operator*(const MultiSeries& o) const
{
    check_compatible(o);
    const unsigned D = degree_bound_;
    MultiSeries r(ring_, nvars_, D);
    if ((is_zero() && polynomial_) || (o.is_zero() && o.polynomial_)) {
        r.polynomial_ = true;
        return r;
    }
    r.polynomial_ = polynomial_ && o.polynomial_ && max_degree() + o.max_degree() <= D;

    std::vector<std::vector<const std::pair<const Monomial, RingElement>*>> by_degree(D + 1);
    for (const auto& t : o.terms_)
        by_degree[total_degree(t.first)].push_back(&t);

    std::map<Monomial, RingElement> acc;
    for (const auto& [ma, ca] : terms_) {
        unsigned da = total_degree(ma);
        for (unsigned db = 0; da + db <= D; ++db) {
            for (const auto* tb : by_degree[db]) {
                RingElement prod = ca * tb->second;
                Monomial m = ma + tb->first;
                auto it = acc.find(m);
                if (it == acc.end())
                    acc.emplace(m, std::move(prod));
                else
                    it->second += prod;
            }
        }
    }
    for (auto& [m, c] : acc)
        if (!c.is_zero())
            r.terms_.emplace(m, std::move(c));
    return r;
}

MultiSeries MultiSeries::scaled(const RingElement& c) const
{
    RingElement cc = coerce(c, ring_);
    MultiSeries r(ring_, nvars_, degree_bound_, polynomial_);
    for (const auto& [m, t] : terms_)
        r.set_term(m, t * cc);
    return r;
}

MultiSeries MultiSeries::pow(unsigned k) const
{
    MultiSeries result = constant(ring_, nvars_, degree_bound_, 1);
    MultiSeries base = *this;
    while (k > 0) {
        if (k & 1)
            result = result * base;
        k >>= 1;
        if (k > 0)
            base = base * base;
    }
    return result;
}

MultiSeries MultiSeries::truncated(unsigned degree_bound) const
{
    if (degree_bound > degree_bound_)
        throw PrecisionError("cannot raise a degree bound by truncation");
    MultiSeries r(ring_, nvars_, degree_bound, polynomial_ && max_degree() <= degree_bound);
    for (const auto& [m, c] : terms_)
        r.set_term(m, c);
    return r;
}

MultiSeries MultiSeries::with_precision(int precision) const
{
    if (precision == ring_->precision())
        return *this;
    if (precision > ring_->precision())
        throw PrecisionError("cannot raise series precision from " + std::to_string(ring_->precision()) +
                             " to " + std::to_string(precision));
    RingPtr target = ring_->with_precision(precision);
    MultiSeries r(target, nvars_, degree_bound_, polynomial_);
    for (const auto& [m, c] : terms_)
        r.set_term(m, RingElement(target, c.coeffs(), c.ceiling()));
    return r;
}

MultiSeries MultiSeries::lift_to(const RingPtr& target) const
{
    if (same_ring(ring_, target))
        return *this;
    MultiSeries r(target, nvars_, degree_bound_, polynomial_);
    for (const auto& [m, c] : terms_)
        r.set_term(m, c.lift_to(target));
    return r;
}

MultiSeries MultiSeries::with_nvars(unsigned nvars) const
{
    if (nvars < nvars_) {
        for (const auto& [m, c] : terms_)
            for (unsigned v = nvars; v < nvars_; ++v)
                if (exponent(m, v) != 0)
                    throw DomainError("cannot drop a variable that occurs in the series");
    }
    MultiSeries r(ring_, nvars, degree_bound_, polynomial_);
    r.terms_ = terms_;
    return r;
}

bool operator==(const MultiSeries& a, const MultiSeries& b)
{
    if (a.nvars_ != b.nvars_ || a.degree_bound_ != b.degree_bound_ || !same_ring(a.ring_, b.ring_))
        return false;
    if (a.terms_.size() != b.terms_.size())
        return false;
    for (auto ia = a.terms_.begin(), ib = b.terms_.begin(); ia != a.terms_.end(); ++ia, ++ib)
        if (ia->first != ib->first || !(ia->second == ib->second))
            return false;
    return true;
}

// ---------------------------------------------------------------------------

int binomial_exponent_precision(std::uint32_t p, int precision, unsigned degree_bound)
{
    return precision + static_cast<int>(factorial_valuation(p, degree_bound));
}

MultiSeries binomial_series_in(const PadicApprox& m, unsigned var, unsigned nvars, unsigned degree_bound,
                               const RingPtr& ring)
{
    if (m.prime() != ring->prime())
        throw MismatchError("binomial exponent and coefficient ring use different primes");
    int needed = binomial_exponent_precision(ring->prime(), ring->precision(), degree_bound);
    if (m.precision() < needed)
        throw PrecisionError("binomial series to degree " + std::to_string(degree_bound) + " mod p^" +
                             std::to_string(ring->precision()) + " needs the exponent mod p^" +
                             std::to_string(needed) + ", got p^" + std::to_string(m.precision()));
    MultiSeries s(ring, nvars, degree_bound);
    const mpz_class& lift = m.value();
    mpz_class c;
    for (unsigned i = 0; i <= degree_bound; ++i) {
        mpz_bin_ui(c.get_mpz_t(), lift.get_mpz_t(), i);
        s.set_term(Monomial{i} << (8 * var), RingElement::from_integer(ring, c));
    }
    return s;
}

MultiSeries binomial_series(const PadicApprox& m, unsigned degree_bound, const RingPtr& ring)
{
    return binomial_series_in(m, 0, 1, degree_bound, ring);
}

MultiSeries binomial_polynomial(std::uint64_t m, unsigned var, unsigned nvars, unsigned degree_bound,
                                const RingPtr& ring)
{
    MultiSeries s(ring, nvars, degree_bound, m <= degree_bound);
    mpz_class c;
    for (unsigned i = 0; i <= degree_bound && i <= m; ++i) {
        mpz_bin_uiui(c.get_mpz_t(), m, i);
        s.set_term(Monomial{i} << (8 * var), RingElement::from_integer(ring, c));
    }
    return s;
}

// ---------------------------------------------------------------------------

namespace {

void check_substitution_shapes(const MultiSeries& phi, std::span<const MultiSeries> g)
{
    if (g.size() != phi.nvars())
        throw MismatchError("substitution needs " + std::to_string(phi.nvars()) + " series, got " +
                            std::to_string(g.size()));
    for (const auto& gi : g) {
        if (gi.nvars() != g[0].nvars() || gi.degree_bound() != g[0].degree_bound() ||
            !same_ring(gi.ring(), g[0].ring()))
            throw MismatchError("substituted series must share shape and ring");
    }
    if (!same_ring(phi.ring(), g[0].ring()) && !phi.ring()->is_base())
        throw MismatchError("outer series ring must match the substituted series' ring or be Z_p");
}

// Sum over the terms of phi of c_alpha prod_i g_i^{alpha_i}, truncated at the
// g's degree bound. Terms are grouped by their exponents in all but the last
// variable so each group costs one series product.
MultiSeries substitute_terms(const MultiSeries& phi, std::span<const MultiSeries> g, bool skip_high_terms)
{
    const unsigned n = phi.nvars();
    const unsigned D = g[0].degree_bound();
    const RingPtr& ring = g[0].ring();
    const unsigned last = n - 1;

    unsigned max_exp = 0;
    for (const auto& [m, c] : phi.terms())
        max_exp = std::max(max_exp, total_degree(m));

    std::vector<std::vector<MultiSeries>> powers(n);
    for (unsigned i = 0; i < n; ++i) {
        powers[i].push_back(MultiSeries::constant(ring, g[0].nvars(), D, 1));
        for (unsigned k = 1; k <= max_exp; ++k) {
            if (skip_high_terms && k > D)
                break;
            powers[i].push_back(powers[i].back() * g[i]);
        }
    }

    std::map<Monomial, std::vector<std::pair<unsigned, const RingElement*>>> groups;
    const Monomial last_mask = Monomial{0xff} << (8 * last);
    for (const auto& [m, c] : phi.terms()) {
        if (skip_high_terms && total_degree(m) > D)
            continue;
        groups[m & ~last_mask].push_back({exponent(m, last), &c});
    }

    std::map<Monomial, MultiSeries> prefix_products;
    prefix_products.emplace(0, MultiSeries::constant(ring, g[0].nvars(), D, 1));
    auto prefix_product = [&](auto&& self, Monomial prefix) -> const MultiSeries& {
        auto it = prefix_products.find(prefix);
        if (it != prefix_products.end())
            return it->second;
        unsigned v = 0;
        while (exponent(prefix, v) == 0)
            ++v;
        const MultiSeries& rest = self(self, prefix - unit_monomial(v));
        MultiSeries prod = rest * g[v];
        return prefix_products.emplace(prefix, std::move(prod)).first->second;
    };

    MultiSeries result(ring, g[0].nvars(), D, true);
    for (const auto& [prefix, items] : groups) {
        MultiSeries inner(ring, g[0].nvars(), D, true);
        for (const auto& [k, c] : items)
            inner = inner + powers[last][k].scaled(*c);
        if (prefix == 0)
            result = result + inner;
        else
            result = result + inner * prefix_product(prefix_product, prefix);
    }
    return result;
}

bool all_polynomial(std::span<const MultiSeries> g)
{
    return std::all_of(g.begin(), g.end(), [](const MultiSeries& s) { return s.is_polynomial(); });
}

} // namespace

MultiSeries substitute(const MultiSeries& phi, std::span<const MultiSeries> g)
{
    check_substitution_shapes(phi, g);
    for (const auto& gi : g)
        if (!gi.constant_term().is_zero())
            throw DomainError("substitution requires zero constant terms (the composite would not "
                              "converge formally)");
    MultiSeries r = substitute_terms(phi, g, true);
    unsigned gdeg = 0;
    for (const auto& gi : g)
        gdeg = std::max(gdeg, gi.max_degree());
    const unsigned D = g[0].degree_bound();
    bool exact = phi.is_polynomial() && all_polynomial(g) && phi.max_degree() * gdeg <= D;
    if (!phi.is_polynomial() && phi.degree_bound() < D)
        exact = false;
    r.set_polynomial(exact);
    return r;
}

SubstitutionResult substitute_with_constants(const MultiSeries& phi, std::span<const MultiSeries> g)
{
    check_substitution_shapes(phi, g);
    const int N = g[0].ring()->precision();
    Rational min_const(N);
    for (const auto& gi : g) {
        RingElement c0 = gi.constant_term();
        ValuationRat v = element_valuation(c0);
        if (!(v.value() > Rational(0)))
            throw DomainError("substituted constant term must have positive valuation");
        min_const = min(min_const, v.value());
    }
    MultiSeries r = substitute_terms(phi, g, false);
    r.set_polynomial(false);
    Rational ceiling(N);
    if (!phi.is_polynomial()) {
        // The first unknown term of phi has total degree phi.D + 1; in its
        // image, the T-degree-j coefficient carries at least phi.D + 1 - j
        // factors of the constant terms.
        std::int64_t factors = static_cast<std::int64_t>(phi.degree_bound()) + 1 -
                               static_cast<std::int64_t>(g[0].degree_bound());
        ceiling = min(ceiling, factors > 0 ? Rational(factors) * min_const : Rational(0));
    }
    for (const auto& [m, c] : r.terms())
        ceiling = min(ceiling, c.ceiling());
    return {std::move(r), ceiling};
}

// ---------------------------------------------------------------------------

ChangeOfVariables::ChangeOfVariables(unsigned nvars) : ChangeOfVariables([&] {
    std::vector<unsigned> perm(nvars);
    std::iota(perm.begin(), perm.end(), 0u);
    return perm;
}())
{
}

ChangeOfVariables::ChangeOfVariables(std::vector<unsigned> permutation) : permutation_(std::move(permutation))
{
    const auto n = permutation_.size();
    if (n == 0 || n > kMaxVars)
        throw DomainError("change of variables needs between 1 and 8 variables");
    std::vector<bool> seen(n, false);
    for (unsigned s : permutation_) {
        if (s >= n || seen[s])
            throw DomainError("not a permutation");
        seen[s] = true;
    }
    lower_.resize(n * (n - 1) / 2);
}

std::size_t ChangeOfVariables::index(unsigned i, unsigned j) const
{
    if (j >= i || i >= nvars())
        throw DomainError("change-of-variables entries are strictly below the diagonal");
    return static_cast<std::size_t>(i) * (i - 1) / 2 + j;
}

const std::optional<PadicApprox>& ChangeOfVariables::entry(unsigned i, unsigned j) const
{
    return lower_[index(i, j)];
}

void ChangeOfVariables::set_entry(unsigned i, unsigned j, const PadicApprox& value)
{
    if (value.is_zero())
        lower_[index(i, j)].reset();
    else
        lower_[index(i, j)] = value;
}

bool ChangeOfVariables::has_identity_permutation() const
{
    for (unsigned i = 0; i < nvars(); ++i)
        if (permutation_[i] != i)
            return false;
    return true;
}

bool ChangeOfVariables::is_identity() const
{
    return has_identity_permutation() &&
           std::none_of(lower_.begin(), lower_.end(), [](const auto& e) { return e.has_value(); });
}

int ChangeOfVariables::min_entry_precision() const
{
    int m = 1 << 20;
    for (const auto& e : lower_)
        if (e)
            m = std::min(m, e->precision());
    return m;
}

ChangeOfVariables ChangeOfVariables::inverse() const
{
    const unsigned n = nvars();
    bool unitriangular = has_identity_permutation();
    bool has_entries = std::any_of(lower_.begin(), lower_.end(), [](const auto& e) { return e.has_value(); });
    if (!unitriangular) {
        if (has_entries)
            throw DomainError("inverse of a permuted unitriangular change is not of this form");
        std::vector<unsigned> inv(n);
        for (unsigned i = 0; i < n; ++i)
            inv[permutation_[i]] = i;
        return ChangeOfVariables(std::move(inv));
    }
    // Forward substitution for U^{-1}: C_ij = -B_ij - sum_{j<k<i} B_ik C_kj.
    ChangeOfVariables inv(n);
    for (unsigned i = 1; i < n; ++i) {
        for (unsigned j = i; j-- > 0;) {
            std::optional<PadicApprox> acc;
            auto accumulate = [&](const PadicApprox& x) { acc = acc ? *acc + x : x; };
            if (entry(i, j))
                accumulate(-*entry(i, j));
            for (unsigned k = j + 1; k < i; ++k)
                if (entry(i, k) && inv.entry(k, j))
                    accumulate(-(*entry(i, k) * *inv.entry(k, j)));
            if (acc)
                inv.set_entry(i, j, *acc);
        }
    }
    return inv;
}

ChangeOfVariables ChangeOfVariables::then(const ChangeOfVariables& next) const
{
    if (nvars() != next.nvars())
        throw MismatchError("composing changes of variables of different arity");
    if (!has_identity_permutation())
        throw DomainError("composition requires the first change to be unitriangular");
    // Point maps compose as A_this o A_next = U_this U_next P_next.
    const unsigned n = nvars();
    ChangeOfVariables r(next.permutation_);
    for (unsigned i = 1; i < n; ++i) {
        for (unsigned j = 0; j < i; ++j) {
            std::optional<PadicApprox> acc;
            auto accumulate = [&](const PadicApprox& x) { acc = acc ? *acc + x : x; };
            if (entry(i, j))
                accumulate(*entry(i, j));
            if (next.entry(i, j))
                accumulate(*next.entry(i, j));
            for (unsigned k = j + 1; k < i; ++k)
                if (entry(i, k) && next.entry(k, j))
                    accumulate(*entry(i, k) * *next.entry(k, j));
            if (acc)
                r.set_entry(i, j, *acc);
        }
    }
    return r;
}

MultiSeries mult_change_of_vars(const MultiSeries& phi, const ChangeOfVariables& cv)
{
    const unsigned n = phi.nvars();
    if (cv.nvars() != n)
        throw MismatchError("change of variables arity differs from the series");
    if (cv.is_identity())
        return phi;
    const RingPtr& ring = phi.ring();
    const unsigned D = phi.degree_bound();
    const auto& sigma = cv.permutation();
    std::vector<MultiSeries> g;
    g.reserve(n);
    for (unsigned i = 0; i < n; ++i) {
        MultiSeries gi = MultiSeries::constant(ring, n, D, 1) + MultiSeries::variable(ring, n, D, sigma[i]);
        for (unsigned j = 0; j < i; ++j)
            if (const auto& b = cv.entry(i, j))
                gi = gi * binomial_series_in(*b, sigma[j], n, D, ring);
        g.push_back(gi - MultiSeries::constant(ring, n, D, 1));
    }
    return substitute(phi, g);
}

// ---------------------------------------------------------------------------

ResidueSeries reduce_mod_pi(const MultiSeries& phi)
{
    const std::uint32_t p = phi.ring()->prime();
    ResidueSeries r{p, phi.nvars(), phi.degree_bound(), {}};
    for (const auto& [m, c] : phi.terms()) {
        // pi^i vanishes mod pi for i >= 1, so only the first coordinate survives.
        std::uint32_t res = static_cast<std::uint32_t>(mpz_fdiv_ui(c.coeffs()[0].get_mpz_t(), p));
        if (res != 0)
            r.terms.emplace(m, res);
    }
    return r;
}

PowerFactor xn_power_factor(const MultiSeries& phi, unsigned var)
{
    if (var >= phi.nvars())
        throw DomainError("variable index out of range");
    ResidueSeries bar = reduce_mod_pi(phi);
    if (bar.is_zero())
        throw DomainError("series vanishes mod pi; divide by pi first");
    unsigned M = kMaxDegree + 1;
    for (const auto& [m, c] : bar.terms)
        M = std::min(M, exponent(m, var));
    if (M > phi.degree_bound())
        throw PrecisionError("X^M factor exceeds the degree bound");
    MultiSeries psi(phi.ring(), phi.nvars(), phi.degree_bound() - M);
    const Monomial shift = Monomial{M} << (8 * var);
    for (const auto& [m, c] : phi.terms())
        if (exponent(m, var) >= M)
            psi.set_term(m - shift, c);
    return {M, psi};
}

std::optional<unsigned> unit_order(const MultiSeries& phi)
{
    if (phi.nvars() != 1)
        throw DomainError("unit_order expects a one-variable series");
    ResidueSeries bar = reduce_mod_pi(phi);
    if (bar.is_zero())
        return std::nullopt;
    return static_cast<unsigned>(bar.terms.begin()->first);
}

// ---------------------------------------------------------------------------

RingElement evaluate(const MultiSeries& phi, std::span<const RingElement> point)
{
    const unsigned n = phi.nvars();
    if (point.size() != n)
        throw MismatchError("point has " + std::to_string(point.size()) + " coordinates, series has " +
                            std::to_string(n) + " variables");
    const RingPtr& ring = point[0].ring();
    for (const auto& x : point)
        if (!same_ring(x.ring(), ring))
            throw MismatchError("point coordinates live in different rings");
    const bool scalar_coeffs = !same_ring(phi.ring(), ring);
    if (scalar_coeffs && !phi.ring()->is_base())
        throw MismatchError("series ring '" + phi.ring()->label() + "' does not match point ring '" +
                            ring->label() + "'");
    if (scalar_coeffs && phi.ring()->precision() < ring->precision())
        throw PrecisionError("series coefficients carry less precision than the point's ring");

    const unsigned D = phi.degree_bound();
    Rational min_val(ring->precision());
    for (const auto& x : point) {
        ValuationRat v = element_valuation(x);
        if (!(v.value() > Rational(0)))
            throw DomainError("evaluation point outside the open unit polydisk (coordinate valuation " +
                              v.str() + ")");
        min_val = min(min_val, v.value());
    }
    Rational tail = phi.is_polynomial() ? Rational(ring->precision())
                                        : Rational(static_cast<std::int64_t>(D) + 1) * min_val;

    const unsigned last = n - 1;
    std::vector<RingElement> last_powers{RingElement::one(ring)};
    unsigned max_last = 0;
    for (const auto& [m, c] : phi.terms())
        max_last = std::max(max_last, exponent(m, last));
    for (unsigned k = 1; k <= max_last; ++k)
        last_powers.push_back(last_powers.back() * point[last]);

    std::map<Monomial, std::vector<std::pair<unsigned, const RingElement*>>> groups;
    const Monomial last_mask = Monomial{0xff} << (8 * last);
    for (const auto& [m, c] : phi.terms())
        groups[m & ~last_mask].push_back({exponent(m, last), &c});

    std::map<Monomial, RingElement> prefix_values;
    prefix_values.emplace(0, RingElement::one(ring));
    auto prefix_value = [&](auto&& self, Monomial prefix) -> const RingElement& {
        auto it = prefix_values.find(prefix);
        if (it != prefix_values.end())
            return it->second;
        unsigned v = 0;
        while (exponent(prefix, v) == 0)
            ++v;
        RingElement val = self(self, prefix - unit_monomial(v)) * point[v];
        return prefix_values.emplace(prefix, std::move(val)).first->second;
    };

    const unsigned e = ring->degree();
    RingElement result(ring);
    for (const auto& [prefix, items] : groups) {
        RingElement inner(ring);
        if (scalar_coeffs) {
            std::vector<mpz_class> acc(e);
            Rational ceil(ring->precision());
            for (const auto& [k, c] : items) {
                const mpz_class& s = c->coeffs()[0];
                const RingElement& pw = last_powers[k];
                for (unsigned i = 0; i < e; ++i)
                    mpz_addmul(acc[i].get_mpz_t(), s.get_mpz_t(), pw.coeffs()[i].get_mpz_t());
                ceil = min(ceil, min(c->ceiling(), pw.ceiling()));
            }
            inner = RingElement(ring, std::move(acc), ceil);
        } else {
            for (const auto& [k, c] : items)
                inner += *c * last_powers[k];
        }
        if (prefix == 0)
            result += inner;
        else
            result += inner * prefix_value(prefix_value, prefix);
    }
    return result.with_ceiling(min(result.ceiling(), tail));
}

} // namespace prig
