// Copyright 2026 The prig Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PRIG_SERIES_HPP
#define PRIG_SERIES_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "prig/padic.hpp"

namespace prig {

// Exponent vector packed into 8-bit lanes: at most 8 variables and total
// degree at most 255. Adding two packed monomials adds exponents lane-wise
// as long as the total degree stays in range.
using Monomial = std::uint64_t;

inline constexpr unsigned kMaxVars = 8;
inline constexpr unsigned kMaxDegree = 255;

Monomial make_monomial(std::span<const unsigned> exponents);
unsigned exponent(Monomial m, unsigned var);
unsigned total_degree(Monomial m);
std::vector<unsigned> exponents(Monomial m, unsigned nvars);
inline Monomial unit_monomial(unsigned var) { return Monomial{1} << (8 * var); }

// Truncated power series in n variables with coefficients in an
// EisensteinRing, kept modulo total degree > D. Absent terms are zero. The
// polynomial flag marks series whose terms above degree D are known to
// vanish; evaluation of such a series has no truncation tail.
class MultiSeries {
public:
    MultiSeries(RingPtr ring, unsigned nvars, unsigned degree_bound, bool polynomial = false);

    static MultiSeries constant(RingPtr ring, unsigned nvars, unsigned degree_bound, const mpz_class& c);
    static MultiSeries variable(RingPtr ring, unsigned nvars, unsigned degree_bound, unsigned var);

    const RingPtr& ring() const { return ring_; }
    unsigned nvars() const { return nvars_; }
    unsigned degree_bound() const { return degree_bound_; }
    bool is_polynomial() const { return polynomial_; }
    void set_polynomial(bool flag) { polynomial_ = flag; }

    const std::map<Monomial, RingElement>& terms() const { return terms_; }
    RingElement coefficient(Monomial m) const;
    RingElement constant_term() const { return coefficient(0); }

    // Overwrites a coefficient; zero coefficients and terms above D are dropped.
    void set_term(Monomial m, const RingElement& c);
    void add_term(Monomial m, const RingElement& c);

    bool is_zero() const { return terms_.empty(); }
    // Largest total degree of a stored term; 0 for the zero series.
    unsigned max_degree() const;

    MultiSeries operator+(const MultiSeries& o) const;
    MultiSeries operator-(const MultiSeries& o) const;
    MultiSeries operator*(const MultiSeries& o) const;
    MultiSeries operator-() const;
    MultiSeries scaled(const RingElement& c) const;
    MultiSeries pow(unsigned k) const;

    MultiSeries truncated(unsigned degree_bound) const;
    MultiSeries with_precision(int precision) const;
    // Re-homes base-ring coefficients into an extension ring.
    MultiSeries lift_to(const RingPtr& target) const;
    // Same coefficients, viewed as a series in more variables.
    MultiSeries with_nvars(unsigned nvars) const;

    // Exact coefficientwise equality modulo p^N and degree > D.
    friend bool operator==(const MultiSeries& a, const MultiSeries& b);

private:
    void check_compatible(const MultiSeries& o) const;

    RingPtr ring_;
    unsigned nvars_;
    unsigned degree_bound_;
    bool polynomial_;
    std::map<Monomial, RingElement> terms_;
};

// Sum_{i<=D} C(m, i) X^i for m in Z_p known modulo p^M. Binomials are exact
// integer binomials of the least nonnegative lift, reduced mod p^N; this is
// correct when M >= N + v_p(D!), which is enforced.
MultiSeries binomial_series(const PadicApprox& m, unsigned degree_bound, const RingPtr& ring);
// Binomial series in variable `var` of an n-variable series.
MultiSeries binomial_series_in(const PadicApprox& m, unsigned var, unsigned nvars, unsigned degree_bound,
                               const RingPtr& ring);
// (1+X)^m for a nonnegative integer m; flagged polynomial when m <= D.
MultiSeries binomial_polynomial(std::uint64_t m, unsigned var, unsigned nvars, unsigned degree_bound,
                                const RingPtr& ring);
// Exponent precision binomial_series needs for coefficients mod p^N up to degree D.
int binomial_exponent_precision(std::uint32_t p, int precision, unsigned degree_bound);

// phi(g_1, ..., g_n); every g_i must have zero constant term.
MultiSeries substitute(const MultiSeries& phi, std::span<const MultiSeries> g);

struct SubstitutionResult {
    MultiSeries series;
    // Certified valuation ceiling of every coefficient.
    Rational ceiling;
};

// phi(g_1, ..., g_n) where the constant terms of g_i may be nonzero but must
// have positive valuation. The sum then converges p-adically rather than
// formally; when phi is not a polynomial the unknown tail of phi (degree
// > D_phi) contributes to the T-degree j coefficient with at least
// D_phi + 1 - j constant factors, so the reported ceiling is
// (D_phi + 1 - D_g) * min_i v(g_i(0)).
SubstitutionResult substitute_with_constants(const MultiSeries& phi, std::span<const MultiSeries> g);

// A multiplicative change of variables: a permutation sigma followed by the
// unitriangular substitution
//   X_i -> (1 + X_{sigma(i)}) prod_{j<i} (1 + X_{sigma(j)})^{B_ij} - 1.
// On torsion tuples it acts by t'_i = t_{sigma(i)} + sum_{j<i} B_ij t_{sigma(j)}
// (additive notation), so that (phi o cv)(t) = phi(cv . t).
class ChangeOfVariables {
public:
    explicit ChangeOfVariables(unsigned nvars);
    ChangeOfVariables(std::vector<unsigned> permutation);

    unsigned nvars() const { return static_cast<unsigned>(permutation_.size()); }
    const std::vector<unsigned>& permutation() const { return permutation_; }
    bool has_identity_permutation() const;
    bool is_identity() const;

    // B_ij for j < i; nullopt means 0.
    const std::optional<PadicApprox>& entry(unsigned i, unsigned j) const;
    void set_entry(unsigned i, unsigned j, const PadicApprox& value);
    // Smallest modulus exponent among the stored entries (large when none).
    int min_entry_precision() const;

    // Inverse; defined for unitriangular changes and for pure permutations.
    ChangeOfVariables inverse() const;
    // The change applying `this` then `next` as pullbacks:
    // apply(apply(phi, a), b) == apply(phi, a.then(b)). Requires `this` to have
    // the identity permutation.
    ChangeOfVariables then(const ChangeOfVariables& next) const;

private:
    std::size_t index(unsigned i, unsigned j) const;

    std::vector<unsigned> permutation_;
    std::vector<std::optional<PadicApprox>> lower_;
};

MultiSeries mult_change_of_vars(const MultiSeries& phi, const ChangeOfVariables& cv);

// Series over the residue field F_p of a totally ramified ring.
struct ResidueSeries {
    std::uint32_t p = 0;
    unsigned nvars = 0;
    unsigned degree_bound = 0;
    std::map<Monomial, std::uint32_t> terms;

    bool is_zero() const { return terms.empty(); }
    friend bool operator==(const ResidueSeries&, const ResidueSeries&) = default;
};

ResidueSeries reduce_mod_pi(const MultiSeries& phi);

struct PowerFactor {
    unsigned power;
    MultiSeries cofactor;
};

// Largest M with X_var^M dividing phi mod pi, and psi with
// phi = X_var^M psi mod pi up to degree D. psi keeps the terms divisible by
// X_var^M (shifted down); the remaining terms are multiples of pi and are
// dropped. psi has degree bound D - M.
PowerFactor xn_power_factor(const MultiSeries& phi, unsigned var);

// Smallest degree carrying a unit coefficient of a one-variable series.
std::optional<unsigned> unit_order(const MultiSeries& phi);

// phi evaluated at a point of the open polydisk. The result's ceiling is
// min(N, point ceilings, tail bound) where the tail bound is
// (D+1) * min_i v(x_i) for truncated series and absent for polynomials.
RingElement evaluate(const MultiSeries& phi, std::span<const RingElement> point);

} // namespace prig

#endif
