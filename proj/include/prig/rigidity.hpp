// Copyright 2026 The prig Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PRIG_RIGIDITY_HPP
#define PRIG_RIGIDITY_HPP

#include <optional>
#include <string>
#include <vector>

#include "prig/torsion.hpp"

namespace prig {

enum class WitnessKind { binomial_relation, subtorus_translate };

std::string_view to_string(WitnessKind k);

// phi vanishes along X_i = zeta0_i (+) [N_i](T), one parameter T. For a
// binomial relation the exponents are (1, m) in the (parameter, dependent)
// coordinates, possibly swapped.
struct SpecialWitness {
    WitnessKind kind = WitnessKind::subtorus_translate;
    // Exponents mod p^K as found on torsion data.
    std::vector<PadicApprox> exponents;
    // The integer lifts that passed verification.
    std::vector<mpz_class> lifts;
    TorsionTuple translate;
    // Index of the coordinate used as the parameter.
    unsigned parameter = 0;
    ValuationRat residual = ValuationRat::at_least(Rational(0));
    Rational required;
};

struct TranslateCheck {
    ValuationRat residual = ValuationRat::at_least(Rational(0));
    // min(N, ceiling of the substitution).
    Rational required;
    bool contains = false;
};

// Substitutes the parametrization into every generator and returns the
// smallest certified coefficient valuation of the resulting one-variable
// series. Exponents need the precision binomial_series asks for.
TranslateCheck verify_subtorus_translate(const GroupPtr& group, std::span<const MultiSeries> generators,
                                         std::span<const PadicApprox> exponents, const TorsionTuple& translate);

struct DetectionResult {
    std::optional<SpecialWitness> witness;
    std::string diagnostic;
};

// Reads Y = xi0 (+) [m](X) (or with X and Y swapped) off the torsion zeros of
// a two-variable series in an exhaustive scan, and verifies it.
DetectionResult detect_binomial_relation(const GroupPtr& group, const MultiSeries& phi, const ScanReport& scan);
DetectionResult detect_binomial_relation(const GroupPtr& group, const MultiSeries& phi, unsigned K);

struct NormalizedSequence {
    ChangeOfVariables cv = ChangeOfVariables(1u);
    std::vector<TorsionTuple> normalized;
    // chains[t][i] = P with x_i = P x_0 for tuple t after the permutation, mod
    // p^{level of x_0}; nullopt when x_0 is the origin or x_i is not a
    // multiple of it.
    std::vector<std::vector<std::optional<PadicApprox>>> chains;
    // Estimated limits A_i (index 0 unused), each mod p^j.
    std::vector<std::optional<PadicApprox>> limits;
    std::vector<bool> finite_projection;
    std::string diagnostic;
};

// Orders coordinates by decreasing level using the majority ordering,
// estimates the limits of the exponent chains on the deepest third of the
// tuples and returns the unitriangular change that subtracts them. Entries
// are known mod p^j; the normalized tuples apply their symmetric lifts.
NormalizedSequence normalize_sequence(std::uint32_t p, std::span<const TorsionTuple> tuples);

enum class Outcome { special_found, bounded_below };

std::string_view to_string(Outcome o);

struct DichotomyReport {
    Outcome outcome = Outcome::bounded_below;
    std::optional<SpecialWitness> witness;
    // Valuation threshold exceeded only by the exception set.
    Rational constant;
    std::vector<TorsionTuple> exceptions;
    std::vector<TorsionTuple> undecided;
    unsigned level = 0;
    int precision = 0;
    unsigned degree_bound = 0;
    std::vector<std::string> diagnostics;
    ScanReport scan;
};

struct DichotomyOptions {
    unsigned level = 1;
    EnumerationMode mode;
    unsigned threads = 0;
};

DichotomyReport dichotomy_report(const GroupPtr& group, std::span<const MultiSeries> generators,
                                 const DichotomyOptions& options);

} // namespace prig

#endif
