// Copyright 2026 The prig Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PRIG_LUBIN_TATE_HPP
#define PRIG_LUBIN_TATE_HPP

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "prig/series.hpp"

namespace prig {

enum class LTKind { cyclotomic, standard, custom };

// Lubin-Tate data over Z_p with uniformizer p and residue field F_p:
// f = pX mod X^2 and f = X^p mod p.
//   cyclotomic: f = (1+X)^p - 1      standard: f = pX + X^p
class LTParams {
public:
    static LTParams cyclotomic(std::uint32_t p);
    static LTParams standard(std::uint32_t p);
    // A user supplied one-variable series over Z_p; both congruences are
    // checked here.
    static LTParams custom(const MultiSeries& f);

    std::uint32_t prime() const { return p_; }
    LTKind kind() const { return kind_; }
    std::string name() const;

    // f as a one-variable series mod p^precision, truncated at degree_bound.
    MultiSeries f(unsigned degree_bound, int precision) const;
    // f as an integer polynomial when it is one (cyclotomic, standard, or a
    // custom series flagged polynomial).
    std::optional<IntPoly> integer_polynomial() const;
    // The user series for custom parameters.
    const std::optional<MultiSeries>& custom_series() const { return custom_; }

private:
    LTParams(std::uint32_t p, LTKind kind, std::optional<MultiSeries> custom);

    std::uint32_t p_;
    LTKind kind_;
    std::optional<MultiSeries> custom_;
};

// The working precision used for the degree-by-degree solves: each degree
// step divides once by p, so N + D digits leave N correct ones.
int lt_working_precision(int precision, unsigned degree_bound);

// The unique [a](X) = aX mod X^2 with f([a](X)) = [a](f(X)), mod (p^N, deg > D).
MultiSeries lt_bracket(const LTParams& params, const PadicApprox& a, unsigned degree_bound, int precision);

// The unique F = X + Y mod deg 2 with f(F(X,Y)) = F(f(X), f(Y)).
MultiSeries lt_group_law(const LTParams& params, unsigned degree_bound, int precision);

// f^{(k)}(X) / f^{(k-1)}(X) over Z (k-fold composites), an Eisenstein
// polynomial of degree p^{k-1}(p-1) whose roots are the points of exact
// order p^k.
IntPoly lt_torsion_minpoly(const LTParams& params, unsigned k);

// A built formal group: the group law plus a cache of endomorphism series
// and torsion rings. Safe to share between threads.
class LTGroup {
public:
    static std::shared_ptr<const LTGroup> build(const LTParams& params, unsigned degree_bound, int precision);

    const LTParams& params() const { return params_; }
    std::uint32_t prime() const { return params_.prime(); }
    unsigned degree_bound() const { return degree_bound_; }
    int precision() const { return precision_; }
    const MultiSeries& law() const { return law_; }

    MultiSeries bracket(const PadicApprox& a) const;
    MultiSeries bracket(const mpz_class& a) const;
    // E_k = Z_p[X]/(lt_torsion_minpoly(k)) at the group's precision.
    RingPtr torsion_ring(unsigned k) const;

private:
    LTGroup(LTParams params, unsigned degree_bound, int precision, MultiSeries law);

    LTParams params_;
    unsigned degree_bound_;
    int precision_;
    MultiSeries law_;

    mutable std::mutex mutex_;
    mutable std::map<mpz_class, MultiSeries> brackets_;
    mutable std::map<unsigned, RingPtr> rings_;
};

// [u](lambda_k) in E_k, where lambda_k is the class of X. Throws
// PrecisionError when the truncation tail prevents certifying its valuation.
RingElement lt_torsion_point(const LTGroup& group, unsigned k, const mpz_class& u);

struct AxiomResult {
    bool pass = true;
    unsigned checks = 0;
    std::string first_failure;
};

struct AxiomReport {
    std::string params;
    int precision = 0;
    unsigned degree_bound = 0;
    unsigned trials = 0;
    // (1) L([a]X,[a]Y) = [a]L(X,Y)   (2) L([a]X,[b]X) = [a+b]X
    // (3) [a]([b]X) = [ab]X           (4) [p] = f and [1] = X
    std::array<AxiomResult, 4> axioms;

    bool all_pass() const;
};

AxiomReport verify_axioms(const LTParams& params, unsigned degree_bound, int precision, unsigned trials,
                          std::uint64_t seed);

// First coefficient where two series differ, formatted for reports.
std::optional<std::string> first_difference(const MultiSeries& a, const MultiSeries& b);

} // namespace prig

#endif
