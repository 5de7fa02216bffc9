// Copyright 2026 The prig Authors
// SPDX-License-Identifier: Apache-2.0

#include "prig/padic.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <tuple>
#include <utility>

namespace prig {

namespace {

using i128 = __int128;

std::int64_t checked_narrow(i128 v)
{
    if (v > INT64_MAX || v < INT64_MIN)
        throw Error("rational overflow");
    return static_cast<std::int64_t>(v);
}

std::pair<std::int64_t, std::int64_t> reduce(i128 num, i128 den)
{
    if (den == 0)
        throw DomainError("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    i128 a = num < 0 ? -num : num;
    i128 b = den;
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    if (a > 1) {
        num /= a;
        den /= a;
    }
    return {checked_narrow(num), checked_narrow(den)};
}

std::int64_t parse_int(std::string_view s)
{
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw DomainError("not an integer: '" + std::string(s) + "'");
    return v;
}

} // namespace

Rational::Rational(std::int64_t num, std::int64_t den)
{
    std::tie(num_, den_) = reduce(num, den);
}

Rational Rational::make_reduced(__int128 num, __int128 den)
{
    Rational r;
    std::tie(r.num_, r.den_) = reduce(num, den);
    return r;
}

Rational operator+(const Rational& a, const Rational& b)
{
    return Rational::make_reduced(i128(a.num_) * b.den_ + i128(b.num_) * a.den_, i128(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b)
{
    return Rational::make_reduced(i128(a.num_) * b.den_ - i128(b.num_) * a.den_, i128(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b)
{
    return Rational::make_reduced(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b)
{
    return Rational::make_reduced(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b)
{
    i128 lhs = i128(a.num_) * b.den_;
    i128 rhs = i128(b.num_) * a.den_;
    if (lhs < rhs)
        return std::strong_ordering::less;
    if (lhs > rhs)
        return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::string Rational::str() const
{
    if (den_ == 1)
        return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(std::string_view text)
{
    auto slash = text.find('/');
    if (slash == std::string_view::npos)
        return Rational(parse_int(text));
    return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

std::string_view to_string(Decision d)
{
    switch (d) {
    case Decision::above:
        return "above";
    case Decision::not_above:
        return "not_above";
    case Decision::undecided:
        return "undecided";
    }
    return "?";
}

Decision ValuationRat::above(const Rational& threshold) const
{
    if (!lower_bound_)
        return value_ > threshold ? Decision::above : Decision::not_above;
    return value_ > threshold ? Decision::above : Decision::undecided;
}

Decision ValuationRat::at_least_as(const Rational& bound) const
{
    if (!lower_bound_)
        return value_ >= bound ? Decision::above : Decision::not_above;
    return value_ >= bound ? Decision::above : Decision::undecided;
}

std::string ValuationRat::str() const
{
    return lower_bound_ ? ">=" + value_.str() : value_.str();
}

ValuationRat ValuationRat::parse(std::string_view text)
{
    if (text.starts_with(">="))
        return at_least(Rational::parse(text.substr(2)));
    return exact(Rational::parse(text));
}

ValuationRat min(const ValuationRat& a, const ValuationRat& b)
{
    if (a.is_exact() && b.is_exact())
        return a.value() <= b.value() ? a : b;
    if (a.is_exact())
        return a.value() < b.value() ? a : ValuationRat::at_least(b.value());
    if (b.is_exact())
        return b.value() < a.value() ? b : ValuationRat::at_least(a.value());
    return ValuationRat::at_least(min(a.value(), b.value()));
}

mpz_class prime_power(std::uint32_t p, unsigned n)
{
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), p, n);
    return r;
}

bool is_prime(std::uint32_t p)
{
    if (p < 2)
        return false;
    for (std::uint32_t d = 2; d * d <= p; ++d)
        if (p % d == 0)
            return false;
    return true;
}

unsigned factorial_valuation(std::uint32_t p, unsigned n)
{
    unsigned v = 0;
    for (std::uint64_t q = p; q <= n; q *= p)
        v += static_cast<unsigned>(n / q);
    return v;
}

unsigned integer_valuation(std::uint32_t p, const mpz_class& n)
{
    if (n == 0)
        throw DomainError("valuation of zero");
    mpz_class t = n;
    unsigned v = 0;
    while (mpz_divisible_ui_p(t.get_mpz_t(), p)) {
        mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(), p);
        ++v;
    }
    return v;
}

// ---------------------------------------------------------------------------

PadicApprox::PadicApprox(std::uint32_t p, int precision, const mpz_class& value) :
    p_(p), precision_(precision)
{
    if (!is_prime(p))
        throw DomainError("p = " + std::to_string(p) + " is not prime");
    if (precision < 1)
        throw PrecisionError("p-adic precision must be positive");
    mpz_fdiv_r(value_.get_mpz_t(), value.get_mpz_t(), modulus().get_mpz_t());
}

PadicApprox PadicApprox::from_integer(std::uint32_t p, int precision, std::int64_t value)
{
    return PadicApprox(p, precision, mpz_class(static_cast<long>(value)));
}

bool PadicApprox::is_unit() const
{
    return !mpz_divisible_ui_p(value_.get_mpz_t(), p_);
}

mpz_class PadicApprox::symmetric_value() const
{
    mpz_class m = modulus();
    if (2 * value_ > m)
        return value_ - m;
    return value_;
}

void PadicApprox::check_compatible(const PadicApprox& o) const
{
    if (p_ != o.p_)
        throw MismatchError("p-adic operands with different primes");
}

PadicApprox PadicApprox::operator+(const PadicApprox& o) const
{
    check_compatible(o);
    return PadicApprox(p_, std::min(precision_, o.precision_), value_ + o.value_);
}

PadicApprox PadicApprox::operator-(const PadicApprox& o) const
{
    check_compatible(o);
    return PadicApprox(p_, std::min(precision_, o.precision_), value_ - o.value_);
}

PadicApprox PadicApprox::operator*(const PadicApprox& o) const
{
    check_compatible(o);
    return PadicApprox(p_, std::min(precision_, o.precision_), value_ * o.value_);
}

PadicApprox PadicApprox::operator-() const
{
    return PadicApprox(p_, precision_, -value_);
}

PadicApprox PadicApprox::divide_by_p() const
{
    if (!mpz_divisible_ui_p(value_.get_mpz_t(), p_))
        throw DomainError("divide_by_p on a value not divisible by p");
    if (precision_ <= 1)
        throw PrecisionError("divide_by_p would leave no significant digits");
    mpz_class q;
    mpz_divexact_ui(q.get_mpz_t(), value_.get_mpz_t(), p_);
    return PadicApprox(p_, precision_ - 1, q);
}

PadicApprox PadicApprox::inverse() const
{
    if (!is_unit())
        throw DomainError("inverse of a non-unit");
    mpz_class r;
    mpz_class m = modulus();
    mpz_invert(r.get_mpz_t(), value_.get_mpz_t(), m.get_mpz_t());
    return PadicApprox(p_, precision_, r);
}

PadicApprox PadicApprox::with_precision(int n) const
{
    if (n > precision_)
        throw PrecisionError("cannot raise precision from " + std::to_string(precision_) + " to " +
                             std::to_string(n));
    return PadicApprox(p_, n, value_);
}

bool operator==(const PadicApprox& a, const PadicApprox& b)
{
    return a.p_ == b.p_ && a.precision_ == b.precision_ && a.value_ == b.value_;
}

ValuationRat val_int(const PadicApprox& x)
{
    if (x.is_zero())
        return ValuationRat::at_least(Rational(x.precision()));
    return ValuationRat::exact(Rational(integer_valuation(x.prime(), x.value())));
}

// ---------------------------------------------------------------------------

void poly_trim(IntPoly& a)
{
    while (!a.empty() && a.back() == 0)
        a.pop_back();
}

IntPoly poly_add(const IntPoly& a, const IntPoly& b)
{
    IntPoly r(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i)
        r[i] += b[i];
    poly_trim(r);
    return r;
}

IntPoly poly_sub(const IntPoly& a, const IntPoly& b)
{
    IntPoly r(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i)
        r[i] -= b[i];
    poly_trim(r);
    return r;
}

IntPoly poly_mul(const IntPoly& a, const IntPoly& b)
{
    if (a.empty() || b.empty())
        return {};
    IntPoly r(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0)
            continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            mpz_addmul(r[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
    }
    poly_trim(r);
    return r;
}

IntPoly poly_compose(const IntPoly& outer, const IntPoly& inner)
{
    IntPoly r;
    for (std::size_t i = outer.size(); i-- > 0;) {
        r = poly_mul(r, inner);
        r = poly_add(r, IntPoly{outer[i]});
    }
    return r;
}

IntPoly poly_divexact(const IntPoly& num, const IntPoly& den)
{
    IntPoly d = den;
    poly_trim(d);
    if (d.empty())
        throw DomainError("polynomial division by zero");
    IntPoly rem = num;
    poly_trim(rem);
    if (rem.size() < d.size())
        throw DomainError("polynomial division is not exact");
    IntPoly q(rem.size() - d.size() + 1);
    const mpz_class& lead = d.back();
    for (std::size_t k = q.size(); k-- > 0;) {
        const mpz_class& top = rem[k + d.size() - 1];
        if (!mpz_divisible_p(top.get_mpz_t(), lead.get_mpz_t()))
            throw DomainError("polynomial division is not exact over Z");
        q[k] = top / lead;
        for (std::size_t j = 0; j < d.size(); ++j)
            mpz_submul(rem[k + j].get_mpz_t(), q[k].get_mpz_t(), d[j].get_mpz_t());
    }
    poly_trim(rem);
    if (!rem.empty())
        throw DomainError("polynomial division is not exact");
    return q;
}

bool is_eisenstein(std::uint32_t p, const IntPoly& poly)
{
    if (poly.size() < 2 || poly.back() != 1)
        return false;
    for (std::size_t i = 0; i + 1 < poly.size(); ++i)
        if (!mpz_divisible_ui_p(poly[i].get_mpz_t(), p))
            return false;
    mpz_class p2 = mpz_class(p) * p;
    return !mpz_divisible_p(poly[0].get_mpz_t(), p2.get_mpz_t());
}

IntPoly cyclotomic_minpoly(std::uint32_t p, unsigned k)
{
    if (!is_prime(p))
        throw DomainError("p = " + std::to_string(p) + " is not prime");
    if (k == 0)
        throw DomainError("cyclotomic level must be at least 1; use the base ring for level 0");
    // Phi_{p^k}(1+X) = sum_{j<p} (1+X)^{j p^{k-1}}.
    mpz_class step = prime_power(p, k - 1);
    unsigned long stride = step.get_ui();
    IntPoly one_plus_x_pow(stride + 1);
    for (unsigned long i = 0; i <= stride; ++i)
        mpz_bin_uiui(one_plus_x_pow[i].get_mpz_t(), stride, i);
    IntPoly result{1};
    IntPoly power{1};
    for (std::uint32_t j = 1; j < p; ++j) {
        power = poly_mul(power, one_plus_x_pow);
        result = poly_add(result, power);
    }
    return result;
}

// ---------------------------------------------------------------------------

EisensteinRing::EisensteinRing(std::uint32_t p, IntPoly minpoly, int precision, std::string label) :
    p_(p), minpoly_(std::move(minpoly)), precision_(precision), label_(std::move(label))
{
    modulus_ = prime_power(p_, static_cast<unsigned>(precision_));
    tail_.resize(degree());
    for (unsigned i = 0; i < degree(); ++i) {
        mpz_class t = -minpoly_[i];
        mpz_fdiv_r(tail_[i].get_mpz_t(), t.get_mpz_t(), modulus_.get_mpz_t());
    }
}

RingPtr EisensteinRing::make(std::uint32_t p, IntPoly minpoly, int precision, std::string label)
{
    if (!is_prime(p))
        throw DomainError("p = " + std::to_string(p) + " is not prime");
    if (precision < 1)
        throw PrecisionError("ring precision must be positive");
    poly_trim(minpoly);
    if (!is_eisenstein(p, minpoly))
        throw DomainError("minimal polynomial of ring '" + label + "' is not Eisenstein at " +
                          std::to_string(p));
    return RingPtr(new EisensteinRing(p, std::move(minpoly), precision, std::move(label)));
}

RingPtr EisensteinRing::base(std::uint32_t p, int precision)
{
    return make(p, IntPoly{-mpz_class(p), 1}, precision, "Zp");
}

RingPtr EisensteinRing::cyclotomic(std::uint32_t p, unsigned k, int precision)
{
    if (k == 0)
        return base(p, precision);
    return make(p, cyclotomic_minpoly(p, k), precision, "cyclotomic:" + std::to_string(k));
}

bool EisensteinRing::same_as(const EisensteinRing& other) const
{
    return this == &other ||
           (p_ == other.p_ && precision_ == other.precision_ && minpoly_ == other.minpoly_);
}

RingPtr EisensteinRing::with_precision(int precision) const
{
    return make(p_, minpoly_, precision, label_);
}

bool same_ring(const RingPtr& a, const RingPtr& b)
{
    return a == b || (a && b && a->same_as(*b));
}

// ---------------------------------------------------------------------------

RingElement::RingElement(RingPtr ring) :
    ring_(std::move(ring)), coeffs_(ring_->degree()), ceiling_(ring_->precision())
{
}

RingElement::RingElement(RingPtr ring, std::vector<mpz_class> coeffs) :
    RingElement(ring, std::move(coeffs), Rational(ring->precision()))
{
}

RingElement::RingElement(RingPtr ring, std::vector<mpz_class> coeffs, Rational ceiling) :
    ring_(std::move(ring)), coeffs_(std::move(coeffs)), ceiling_(ceiling)
{
    if (coeffs_.size() != ring_->degree())
        throw MismatchError("ring element needs " + std::to_string(ring_->degree()) + " coordinates, got " +
                            std::to_string(coeffs_.size()));
    for (auto& c : coeffs_)
        mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), ring_->modulus().get_mpz_t());
    ceiling_ = min(ceiling_, Rational(ring_->precision()));
}

RingElement RingElement::from_integer(RingPtr ring, const mpz_class& n)
{
    std::vector<mpz_class> c(ring->degree());
    c[0] = n;
    return RingElement(std::move(ring), std::move(c));
}

RingElement RingElement::uniformizer(RingPtr ring)
{
    std::vector<mpz_class> c(ring->degree());
    if (ring->degree() == 1)
        c[0] = -ring->minpoly()[0];
    else
        c[1] = 1;
    return RingElement(std::move(ring), std::move(c));
}

PadicApprox RingElement::coeff(unsigned i) const
{
    return PadicApprox(ring_->prime(), ring_->precision(), coeffs_.at(i));
}

bool RingElement::is_zero() const
{
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const mpz_class& c) { return c == 0; });
}

RingElement RingElement::with_ceiling(const Rational& c) const
{
    RingElement r = *this;
    r.ceiling_ = min(c, Rational(ring_->precision()));
    return r;
}

RingElement RingElement::lift_to(const RingPtr& target) const
{
    if (same_ring(ring_, target))
        return *this;
    if (!ring_->is_base() || ring_->prime() != target->prime())
        throw MismatchError("can only lift base-ring scalars into an extension of the same prime");
    if (target->precision() > ring_->precision())
        throw PrecisionError("lifting into a ring of higher precision");
    std::vector<mpz_class> c(target->degree());
    c[0] = coeffs_[0];
    return RingElement(target, std::move(c), ceiling_);
}

void RingElement::check_same_ring(const RingElement& o) const
{
    if (!same_ring(ring_, o.ring_))
        throw MismatchError("ring elements from different rings ('" + ring_->label() + "' vs '" +
                            o.ring_->label() + "')");
}

RingElement RingElement::operator+(const RingElement& o) const
{
    RingElement r = *this;
    r += o;
    return r;
}

RingElement RingElement::operator-(const RingElement& o) const
{
    RingElement r = *this;
    r -= o;
    return r;
}

RingElement& RingElement::operator+=(const RingElement& o)
{
    check_same_ring(o);
    const mpz_class& m = ring_->modulus();
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        coeffs_[i] += o.coeffs_[i];
        if (coeffs_[i] >= m)
            coeffs_[i] -= m;
    }
    ceiling_ = min(ceiling_, o.ceiling_);
    return *this;
}

RingElement& RingElement::operator-=(const RingElement& o)
{
    check_same_ring(o);
    const mpz_class& m = ring_->modulus();
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        coeffs_[i] -= o.coeffs_[i];
        if (coeffs_[i] < 0)
            coeffs_[i] += m;
    }
    ceiling_ = min(ceiling_, o.ceiling_);
    return *this;
}

RingElement RingElement::operator-() const
{
    RingElement r(ring_);
    r -= *this;
    return r;
}

RingElement RingElement::operator*(const RingElement& o) const
{
    check_same_ring(o);
    const unsigned e = ring_->degree();
    const mpz_class& m = ring_->modulus();
    Rational ceil = min(ceiling_, o.ceiling_);
    if (e == 1) {
        std::vector<mpz_class> c(1);
        c[0] = coeffs_[0] * o.coeffs_[0];
        return RingElement(ring_, std::move(c), ceil);
    }
    std::vector<mpz_class> prod(2 * e - 1);
    for (unsigned i = 0; i < e; ++i) {
        if (coeffs_[i] == 0)
            continue;
        for (unsigned j = 0; j < e; ++j)
            mpz_addmul(prod[i + j].get_mpz_t(), coeffs_[i].get_mpz_t(), o.coeffs_[j].get_mpz_t());
    }
    const auto& tail = ring_->reduction_tail();
    for (unsigned d = 2 * e - 2; d >= e; --d) {
        mpz_fdiv_r(prod[d].get_mpz_t(), prod[d].get_mpz_t(), m.get_mpz_t());
        if (prod[d] == 0)
            continue;
        for (unsigned i = 0; i < e; ++i)
            mpz_addmul(prod[d - e + i].get_mpz_t(), prod[d].get_mpz_t(), tail[i].get_mpz_t());
    }
    prod.resize(e);
    return RingElement(ring_, std::move(prod), ceil);
}

RingElement RingElement::scaled(const mpz_class& k) const
{
    std::vector<mpz_class> c = coeffs_;
    for (auto& x : c)
        x *= k;
    return RingElement(ring_, std::move(c), ceiling_);
}

RingElement RingElement::pow(const mpz_class& exponent) const
{
    if (exponent < 0)
        throw DomainError("negative power in a ring of integers");
    RingElement result = one(ring_).with_ceiling(ceiling_);
    RingElement base = *this;
    mpz_class e = exponent;
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t()))
            result = result * base;
        e >>= 1;
        if (e > 0)
            base = base * base;
    }
    return result;
}

bool operator==(const RingElement& a, const RingElement& b)
{
    return same_ring(a.ring_, b.ring_) && a.coeffs_ == b.coeffs_;
}

ValuationRat element_valuation(const RingElement& a)
{
    const auto& ring = *a.ring();
    const auto e = static_cast<std::int64_t>(ring.degree());
    Rational cap = min(a.ceiling(), Rational(ring.precision()));
    bool found = false;
    Rational best;
    for (std::int64_t i = 0; i < e; ++i) {
        const mpz_class& c = a.coeffs()[static_cast<std::size_t>(i)];
        if (c == 0)
            continue;
        Rational v = Rational(static_cast<std::int64_t>(integer_valuation(ring.prime(), c))) + Rational(i, e);
        if (!found || v < best) {
            best = v;
            found = true;
        }
    }
    if (found && best < cap)
        return ValuationRat::exact(best);
    return ValuationRat::at_least(cap);
}

} // namespace prig
