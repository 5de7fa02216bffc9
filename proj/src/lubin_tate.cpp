// Copyright 2026 The prig Authors
// SPDX-License-Identifier: Apache-2.0

#include "prig/lubin_tate.hpp"

#include <random>
#include <set>
#include <sstream>

namespace prig {

namespace {

// A one-variable series re-expressed in variable `var` of `nvars`.
MultiSeries in_variable(const MultiSeries& s, unsigned var, unsigned nvars)
{
    MultiSeries r(s.ring(), nvars, s.degree_bound(), s.is_polynomial());
    for (const auto& [m, c] : s.terms())
        r.set_term(m << (8 * var), c);
    return r;
}

IntPoly standard_polynomial(std::uint32_t p)
{
    IntPoly f(p + 1);
    f[1] = p;
    f[p] += 1;
    return f;
}

IntPoly cyclotomic_polynomial(std::uint32_t p)
{
    IntPoly f(p + 1);
    for (std::uint32_t i = 1; i <= p; ++i)
        mpz_bin_uiui(f[i].get_mpz_t(), p, i);
    return f;
}

MultiSeries series_from_poly(const IntPoly& poly, unsigned degree_bound, int precision, std::uint32_t p)
{
    RingPtr ring = EisensteinRing::base(p, precision);
    MultiSeries s(ring, 1, degree_bound, poly.size() <= degree_bound + 1);
    for (std::size_t i = 0; i < poly.size() && i <= degree_bound; ++i)
        s.set_term(i, RingElement::from_integer(ring, poly[i]));
    return s;
}

void check_lubin_tate(const MultiSeries& f)
{
    const std::uint32_t p = f.ring()->prime();
    if (f.nvars() != 1 || !f.ring()->is_base())
        throw DomainError("Lubin-Tate f must be a one-variable series over Z_p");
    if (f.degree_bound() < p)
        throw DomainError("Lubin-Tate f needs degree bound >= p to check f = X^p mod p");
    if (!f.constant_term().is_zero())
        throw DomainError("Lubin-Tate f must have zero constant term");
    if (f.coefficient(1).coeffs()[0] != mpz_class(p) % f.ring()->modulus())
        throw DomainError("Lubin-Tate f must satisfy f = pX mod X^2");
    ResidueSeries bar = reduce_mod_pi(f);
    if (bar.terms.size() != 1 || bar.terms.begin()->first != Monomial{p} || bar.terms.begin()->second != 1)
        throw DomainError("Lubin-Tate f must satisfy f = X^p mod p");
}

// Solves for G with the given linear part and f(G) = G(f(X_1), ..., f(X_n)),
// working mod p^W. At degree d the unknown homogeneous part enters the two
// sides as p G_d and p^d G_d, so G_d = known / (p - p^d) with the known part
// computed from G_{<d}.
MultiSeries solve_commuting_series(const MultiSeries& f, const MultiSeries& linear, unsigned D)
{
    const RingPtr& ring = linear.ring();
    const std::uint32_t p = ring->prime();
    const unsigned n = linear.nvars();
    MultiSeries G(ring, n, D);
    for (const auto& [m, c] : linear.terms())
        G.set_term(m, c);

    for (unsigned d = 2; d <= D; ++d) {
        MultiSeries Gt = G.truncated(d);
        MultiSeries ft = f.truncated(d);
        MultiSeries lhs = substitute(ft, std::span<const MultiSeries>(&Gt, 1));
        std::vector<MultiSeries> fs;
        for (unsigned i = 0; i < n; ++i)
            fs.push_back(in_variable(ft, i, n));
        MultiSeries rhs = substitute(Gt, fs);

        std::set<Monomial> monos;
        for (const auto& [m, c] : lhs.terms())
            if (total_degree(m) == d)
                monos.insert(m);
        for (const auto& [m, c] : rhs.terms())
            if (total_degree(m) == d)
                monos.insert(m);

        // (1 - p^{d-1})^{-1} mod p^W
        mpz_class unit = 1 - prime_power(p, d - 1);
        mpz_class unit_inv;
        mpz_invert(unit_inv.get_mpz_t(), unit.get_mpz_t(), ring->modulus().get_mpz_t());

        for (Monomial m : monos) {
            RingElement known = rhs.coefficient(m) - lhs.coefficient(m);
            const mpz_class& k = known.coeffs()[0];
            if (!mpz_divisible_ui_p(k.get_mpz_t(), p))
                throw DomainError("functional equation has no integral solution at degree " + std::to_string(d) +
                                  "; f does not define a Lubin-Tate group");
            mpz_class q;
            mpz_divexact_ui(q.get_mpz_t(), k.get_mpz_t(), p);
            G.set_term(m, RingElement::from_integer(ring, q * unit_inv));
        }
    }
    return G;
}

} // namespace

// ---------------------------------------------------------------------------

LTParams::LTParams(std::uint32_t p, LTKind kind, std::optional<MultiSeries> custom) :
    p_(p), kind_(kind), custom_(std::move(custom))
{
    if (!is_prime(p_))
        throw DomainError("p = " + std::to_string(p_) + " is not prime");
    if (custom_)
        check_lubin_tate(*custom_);
}

LTParams LTParams::cyclotomic(std::uint32_t p) { return LTParams(p, LTKind::cyclotomic, std::nullopt); }
LTParams LTParams::standard(std::uint32_t p) { return LTParams(p, LTKind::standard, std::nullopt); }
LTParams LTParams::custom(const MultiSeries& f) { return LTParams(f.ring()->prime(), LTKind::custom, f); }

std::string LTParams::name() const
{
    switch (kind_) {
    case LTKind::cyclotomic:
        return "cyclotomic";
    case LTKind::standard:
        return "standard";
    case LTKind::custom:
        return "custom";
    }
    return "?";
}

MultiSeries LTParams::f(unsigned degree_bound, int precision) const
{
    switch (kind_) {
    case LTKind::cyclotomic:
        return series_from_poly(cyclotomic_polynomial(p_), degree_bound, precision, p_);
    case LTKind::standard:
        return series_from_poly(standard_polynomial(p_), degree_bound, precision, p_);
    case LTKind::custom:
        break;
    }
    const MultiSeries& f = *custom_;
    if (f.ring()->precision() < precision)
        throw PrecisionError("custom f is known mod p^" + std::to_string(f.ring()->precision()) + ", need p^" +
                             std::to_string(precision));
    if (f.degree_bound() < degree_bound && !f.is_polynomial())
        throw PrecisionError("custom f is truncated at degree " + std::to_string(f.degree_bound()) + ", need " +
                             std::to_string(degree_bound));
    MultiSeries g = f.with_precision(precision);
    MultiSeries r(g.ring(), 1, degree_bound, f.is_polynomial() && f.max_degree() <= degree_bound);
    for (const auto& [m, c] : g.terms())
        r.set_term(m, c);
    return r;
}

std::optional<IntPoly> LTParams::integer_polynomial() const
{
    switch (kind_) {
    case LTKind::cyclotomic:
        return cyclotomic_polynomial(p_);
    case LTKind::standard:
        return standard_polynomial(p_);
    case LTKind::custom:
        break;
    }
    if (!custom_->is_polynomial())
        return std::nullopt;
    IntPoly poly(custom_->max_degree() + 1);
    for (const auto& [m, c] : custom_->terms())
        poly[m] = c.coeff(0).symmetric_value();
    return poly;
}

int lt_working_precision(int precision, unsigned degree_bound)
{
    return precision + static_cast<int>(degree_bound);
}

MultiSeries lt_bracket(const LTParams& params, const PadicApprox& a, unsigned degree_bound, int precision)
{
    const std::uint32_t p = params.prime();
    if (a.prime() != p)
        throw MismatchError("bracket scalar has a different prime");
    const int W = lt_working_precision(precision, degree_bound);
    if (a.precision() < W)
        throw PrecisionError("[a] mod p^" + std::to_string(precision) + " to degree " +
                             std::to_string(degree_bound) + " needs a mod p^" + std::to_string(W) + ", got p^" +
                             std::to_string(a.precision()));
    MultiSeries f = params.f(degree_bound, W);
    RingPtr ring = f.ring();
    MultiSeries linear(ring, 1, degree_bound);
    linear.set_term(1, RingElement::from_integer(ring, a.value()));
    return solve_commuting_series(f, linear, degree_bound).with_precision(precision);
}

MultiSeries lt_group_law(const LTParams& params, unsigned degree_bound, int precision)
{
    const int W = lt_working_precision(precision, degree_bound);
    MultiSeries f = params.f(degree_bound, W);
    RingPtr ring = f.ring();
    MultiSeries linear(ring, 2, degree_bound);
    linear.set_term(unit_monomial(0), RingElement::one(ring));
    linear.set_term(unit_monomial(1), RingElement::one(ring));
    return solve_commuting_series(f, linear, degree_bound).with_precision(precision);
}

IntPoly lt_torsion_minpoly(const LTParams& params, unsigned k)
{
    if (k == 0)
        throw DomainError("torsion level must be at least 1");
    auto f = params.integer_polynomial();
    if (!f)
        throw DomainError("torsion polynomial needs f to be a polynomial");
    IntPoly prev{0, 1};
    IntPoly cur = *f;
    for (unsigned i = 1; i < k; ++i) {
        prev = cur;
        cur = poly_compose(*f, cur);
    }
    IntPoly q = poly_divexact(cur, prev);
    if (!is_eisenstein(params.prime(), q))
        throw DomainError("torsion polynomial is not Eisenstein; f is not a Lubin-Tate polynomial");
    return q;
}

// ---------------------------------------------------------------------------

LTGroup::LTGroup(LTParams params, unsigned degree_bound, int precision, MultiSeries law) :
    params_(std::move(params)), degree_bound_(degree_bound), precision_(precision), law_(std::move(law))
{
}

std::shared_ptr<const LTGroup> LTGroup::build(const LTParams& params, unsigned degree_bound, int precision)
{
    MultiSeries law = lt_group_law(params, degree_bound, precision);
    return std::shared_ptr<const LTGroup>(new LTGroup(params, degree_bound, precision, std::move(law)));
}

MultiSeries LTGroup::bracket(const mpz_class& a) const
{
    const int W = lt_working_precision(precision_, degree_bound_);
    return bracket(PadicApprox(prime(), W, a));
}

MultiSeries LTGroup::bracket(const PadicApprox& a) const
{
    const int W = lt_working_precision(precision_, degree_bound_);
    if (a.precision() < W)
        throw PrecisionError("[a] needs a mod p^" + std::to_string(W));
    PadicApprox key = a.with_precision(W);
    {
        std::lock_guard lock(mutex_);
        auto it = brackets_.find(key.value());
        if (it != brackets_.end())
            return it->second;
    }
    MultiSeries s = lt_bracket(params_, key, degree_bound_, precision_);
    std::lock_guard lock(mutex_);
    return brackets_.emplace(key.value(), std::move(s)).first->second;
}

RingPtr LTGroup::torsion_ring(unsigned k) const
{
    std::lock_guard lock(mutex_);
    auto it = rings_.find(k);
    if (it != rings_.end())
        return it->second;
    RingPtr ring = k == 0 ? EisensteinRing::base(prime(), precision_)
                          : EisensteinRing::make(prime(), lt_torsion_minpoly(params_, k), precision_,
                                                 "lt-" + params_.name() + ":" + std::to_string(k));
    rings_.emplace(k, ring);
    return ring;
}

RingElement lt_torsion_point(const LTGroup& group, unsigned k, const mpz_class& u)
{
    if (k == 0)
        throw DomainError("torsion level must be at least 1");
    if (mpz_divisible_ui_p(u.get_mpz_t(), group.prime()))
        throw DomainError("exponent must be a unit for a point of exact order p^k");
    RingPtr ring = group.torsion_ring(k);
    mpz_class a;
    mpz_class mod = prime_power(group.prime(), k);
    mpz_fdiv_r(a.get_mpz_t(), u.get_mpz_t(), mod.get_mpz_t());
    RingElement lambda = RingElement::uniformizer(ring);
    MultiSeries br = group.bracket(a);
    RingElement pt = evaluate(br, std::span<const RingElement>(&lambda, 1));
    if (!element_valuation(pt).is_exact())
        throw PrecisionError("degree bound " + std::to_string(group.degree_bound()) +
                             " too small to certify the torsion point's valuation at level " + std::to_string(k));
    return pt;
}

// ---------------------------------------------------------------------------

bool AxiomReport::all_pass() const
{
    for (const auto& a : axioms)
        if (!a.pass)
            return false;
    return true;
}

std::optional<std::string> first_difference(const MultiSeries& a, const MultiSeries& b)
{
    if (a.nvars() != b.nvars() || a.degree_bound() != b.degree_bound())
        return "series shapes differ";
    std::set<Monomial> monos;
    for (const auto& [m, c] : a.terms())
        monos.insert(m);
    for (const auto& [m, c] : b.terms())
        monos.insert(m);
    for (Monomial m : monos) {
        RingElement ca = a.coefficient(m);
        RingElement cb = b.coefficient(m).lift_to(ca.ring());
        if (!(ca == cb)) {
            std::ostringstream os;
            os << "exponent [";
            auto e = exponents(m, a.nvars());
            for (std::size_t i = 0; i < e.size(); ++i)
                os << (i ? "," : "") << e[i];
            os << "]: " << ca.coeffs()[0].get_str() << " vs " << cb.coeffs()[0].get_str();
            return os.str();
        }
    }
    return std::nullopt;
}

AxiomReport verify_axioms(const LTParams& params, unsigned degree_bound, int precision, unsigned trials,
                          std::uint64_t seed)
{
    auto group = LTGroup::build(params, degree_bound, precision);
    const std::uint32_t p = params.prime();
    const int W = lt_working_precision(precision, degree_bound);
    const mpz_class modulus = prime_power(p, static_cast<unsigned>(W));
    const MultiSeries& L = group->law();
    RingPtr ring = L.ring();

    AxiomReport report;
    report.params = params.name();
    report.precision = precision;
    report.degree_bound = degree_bound;
    report.trials = trials;

    auto record = [](AxiomResult& r, const MultiSeries& lhs, const MultiSeries& rhs, const std::string& ctx) {
        ++r.checks;
        if (auto diff = first_difference(lhs, rhs)) {
            if (r.pass)
                r.first_failure = ctx + ": " + *diff;
            r.pass = false;
        }
    };

    gmp_randclass rng(gmp_randinit_mt);
    rng.seed(static_cast<unsigned long>(seed));
    const MultiSeries Y = MultiSeries::variable(ring, 2, degree_bound, 1);
    const MultiSeries X2 = MultiSeries::variable(ring, 2, degree_bound, 0);

    for (unsigned t = 0; t < trials; ++t) {
        mpz_class a = t == 0 ? mpz_class(0) : mpz_class(rng.get_z_range(modulus));
        mpz_class b = t == 0 ? mpz_class(0) : mpz_class(rng.get_z_range(modulus));
        const std::string ctx = "a=" + a.get_str() + " b=" + b.get_str();
        MultiSeries ba = group->bracket(a);
        MultiSeries bb = group->bracket(b);

        std::vector<MultiSeries> ab_xy{in_variable(ba, 0, 2), in_variable(ba, 1, 2)};
        record(report.axioms[0], substitute(L, ab_xy), substitute(ba, std::span<const MultiSeries>(&L, 1)), ctx);

        std::vector<MultiSeries> ab_x{ba, bb};
        record(report.axioms[1], substitute(L, ab_x), group->bracket(mpz_class((a + b) % modulus)), ctx);

        record(report.axioms[2], substitute(ba, std::span<const MultiSeries>(&bb, 1)),
               group->bracket(mpz_class((a * b) % modulus)), ctx);
    }
    (void)X2;
    (void)Y;

    record(report.axioms[3], group->bracket(mpz_class(p)), params.f(degree_bound, precision), "[p] = f");
    record(report.axioms[3], group->bracket(mpz_class(1)), MultiSeries::variable(ring, 1, degree_bound, 0),
           "[1] = X");
    return report;
}

} // namespace prig
