// Copyright 2026 The prig Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PRIG_PADIC_HPP
#define PRIG_PADIC_HPP

#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "prig/errors.hpp"

namespace prig {

// Exact rational with 64-bit numerator and positive denominator, always
// reduced. Valuations at desk scale never come close to the limits.
class Rational {
public:
    Rational() = default;
    Rational(std::int64_t num, std::int64_t den = 1);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    Rational operator-() const { return {-num_, den_}; }

    friend bool operator==(const Rational& a, const Rational& b) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

    // "3" or "1/2".
    std::string str() const;
    static Rational parse(std::string_view text);

private:
    static Rational make_reduced(__int128 num, __int128 den);

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

// Three-way answer to "is the valuation certainly above a threshold".
enum class Decision { above, not_above, undecided };

std::string_view to_string(Decision d);

// A p-adic valuation normalized so that v(p) = 1. Either an exact rational or
// a lower bound produced when the value is indistinguishable from zero at the
// available precision.
class ValuationRat {
public:
    static ValuationRat exact(Rational v) { return ValuationRat(v, false); }
    static ValuationRat at_least(Rational bound) { return ValuationRat(bound, true); }

    bool is_exact() const { return !lower_bound_; }
    bool is_lower_bound() const { return lower_bound_; }
    // The exact value, or the bound for AtLeast values.
    const Rational& value() const { return value_; }

    // Strict comparison against a threshold; AtLeast(b) is only "above" when
    // b itself exceeds the threshold.
    Decision above(const Rational& threshold) const;
    // Non-strict variant used for congruence checks (v >= bound).
    Decision at_least_as(const Rational& bound) const;

    friend bool operator==(const ValuationRat& a, const ValuationRat& b) = default;

    // "1/2" for exact values, ">=12" for bounds.
    std::string str() const;
    static ValuationRat parse(std::string_view text);

private:
    ValuationRat(Rational v, bool lb) : value_(v), lower_bound_(lb) {}
    Rational value_;
    bool lower_bound_ = false;
};

// Minimum of two valuations (the valuation bound of a sum, or the
// min-over-generators used by scans).
ValuationRat min(const ValuationRat& a, const ValuationRat& b);

mpz_class prime_power(std::uint32_t p, unsigned n);
bool is_prime(std::uint32_t p);
// v_p(n!) by Legendre's formula.
unsigned factorial_valuation(std::uint32_t p, unsigned n);
// v_p of a nonzero integer.
unsigned integer_valuation(std::uint32_t p, const mpz_class& n);

// An integer known modulo p^precision, stored as its least nonnegative
// residue.
class PadicApprox {
public:
    PadicApprox(std::uint32_t p, int precision, const mpz_class& value);
    static PadicApprox from_integer(std::uint32_t p, int precision, std::int64_t value);

    std::uint32_t prime() const { return p_; }
    int precision() const { return precision_; }
    const mpz_class& value() const { return value_; }
    mpz_class modulus() const { return prime_power(p_, static_cast<unsigned>(precision_)); }

    bool is_zero() const { return value_ == 0; }
    bool is_unit() const;

    // Representative in (-p^N/2, p^N/2].
    mpz_class symmetric_value() const;

    PadicApprox operator+(const PadicApprox& o) const;
    PadicApprox operator-(const PadicApprox& o) const;
    PadicApprox operator*(const PadicApprox& o) const;
    PadicApprox operator-() const;

    // Only defined when value = 0 mod p; the result loses one digit.
    PadicApprox divide_by_p() const;
    // Multiplicative inverse; requires a unit.
    PadicApprox inverse() const;
    // Drops digits; never raises claimed precision.
    PadicApprox with_precision(int n) const;

    friend bool operator==(const PadicApprox& a, const PadicApprox& b);

private:
    void check_compatible(const PadicApprox& o) const;

    std::uint32_t p_;
    int precision_;
    mpz_class value_;
};

ValuationRat val_int(const PadicApprox& x);

// Integer polynomial, coefficients from low to high degree.
using IntPoly = std::vector<mpz_class>;

IntPoly poly_mul(const IntPoly& a, const IntPoly& b);
IntPoly poly_add(const IntPoly& a, const IntPoly& b);
IntPoly poly_sub(const IntPoly& a, const IntPoly& b);
IntPoly poly_compose(const IntPoly& outer, const IntPoly& inner);
// Exact quotient; throws DomainError when the division leaves a remainder.
IntPoly poly_divexact(const IntPoly& num, const IntPoly& den);
void poly_trim(IntPoly& a);
bool is_eisenstein(std::uint32_t p, const IntPoly& poly);

// Phi_{p^k}(1 + X), the minimal polynomial of zeta_{p^k} - 1.
IntPoly cyclotomic_minpoly(std::uint32_t p, unsigned k);

class EisensteinRing;
using RingPtr = std::shared_ptr<const EisensteinRing>;

// Z_p[X]/(g) modulo p^N for an Eisenstein polynomial g of degree e. The
// class of X is a uniformizer of valuation 1/e. Degree one with g = X - p is
// Z/p^N itself.
class EisensteinRing {
public:
    static RingPtr make(std::uint32_t p, IntPoly minpoly, int precision, std::string label);
    static RingPtr base(std::uint32_t p, int precision);
    static RingPtr cyclotomic(std::uint32_t p, unsigned k, int precision);

    std::uint32_t prime() const { return p_; }
    unsigned degree() const { return static_cast<unsigned>(minpoly_.size() - 1); }
    int precision() const { return precision_; }
    const IntPoly& minpoly() const { return minpoly_; }
    const std::string& label() const { return label_; }
    const mpz_class& modulus() const { return modulus_; }
    bool is_base() const { return degree() == 1; }
    Rational uniformizer_valuation() const { return {1, static_cast<std::int64_t>(degree())}; }

    // -minpoly[i] mod p^N for i < e: the reduction rule X^e = sum tail[i] X^i.
    const std::vector<mpz_class>& reduction_tail() const { return tail_; }

    bool same_as(const EisensteinRing& other) const;
    RingPtr with_precision(int precision) const;

private:
    EisensteinRing(std::uint32_t p, IntPoly minpoly, int precision, std::string label);

    std::uint32_t p_;
    IntPoly minpoly_;
    int precision_;
    std::string label_;
    mpz_class modulus_;
    std::vector<mpz_class> tail_;
};

bool same_ring(const RingPtr& a, const RingPtr& b);

// Element of an EisensteinRing in the power basis 1, pi, ..., pi^{e-1}.
// The ceiling records the valuation above which the element is unknown; it is
// N for exact arithmetic and drops when a truncated series is evaluated.
class RingElement {
public:
    explicit RingElement(RingPtr ring);
    RingElement(RingPtr ring, std::vector<mpz_class> coeffs);
    RingElement(RingPtr ring, std::vector<mpz_class> coeffs, Rational ceiling);

    static RingElement from_integer(RingPtr ring, const mpz_class& n);
    static RingElement one(RingPtr ring) { return from_integer(std::move(ring), 1); }
    // Class of X.
    static RingElement uniformizer(RingPtr ring);

    const RingPtr& ring() const { return ring_; }
    const std::vector<mpz_class>& coeffs() const { return coeffs_; }
    PadicApprox coeff(unsigned i) const;
    const Rational& ceiling() const { return ceiling_; }

    bool is_zero() const;
    RingElement with_ceiling(const Rational& c) const;
    // Embed an element of the base ring Z/p^N into an extension of the same p.
    RingElement lift_to(const RingPtr& target) const;

    RingElement operator+(const RingElement& o) const;
    RingElement operator-(const RingElement& o) const;
    RingElement operator*(const RingElement& o) const;
    RingElement operator-() const;
    RingElement& operator+=(const RingElement& o);
    RingElement& operator-=(const RingElement& o);
    RingElement scaled(const mpz_class& k) const;
    RingElement pow(const mpz_class& exponent) const;

    // Coefficientwise equality (ceilings are ignored).
    friend bool operator==(const RingElement& a, const RingElement& b);

private:
    void check_same_ring(const RingElement& o) const;

    RingPtr ring_;
    std::vector<mpz_class> coeffs_;
    Rational ceiling_;
};

// Valuation of a ring element from its power-basis coordinates.
//
// The term c_i pi^i has valuation v_p(c_i) + i/e. For 0 <= i < e these
// numbers have pairwise distinct fractional parts, so no two nonzero terms
// can tie and the minimum is attained by exactly one term; the ultrametric
// inequality is then an equality. A coordinate that vanishes mod p^N only
// contributes something of valuation >= N, hence the result is exact
// whenever the minimum lies strictly below min(N, ceiling).
ValuationRat element_valuation(const RingElement& a);

} // namespace prig

#endif
