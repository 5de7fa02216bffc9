// Copyright 2026 The prig Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PRIG_JSON_IO_HPP
#define PRIG_JSON_IO_HPP

#include <json.hpp>

#include "prig/rigidity.hpp"

namespace prig {

using json = nlohmann::ordered_json;

// Every *_from_json throws ParseError on malformed input and the usual
// domain errors on mathematically invalid input.

json ring_to_json(const EisensteinRing& ring);
// "Zp" or {"p", "precision", "minpoly": [decimal strings, low to high], "label"}.
RingPtr ring_from_json(const json& j, std::uint32_t p, int precision);

json element_to_json(const RingElement& a);

json padic_to_json(const PadicApprox& a);
PadicApprox padic_from_json(const json& j, std::uint32_t p);

// {"p","precision","degree_bound","vars","coeff_ring","terms":[{"exp","coeff"}]}
// with an optional "polynomial": true. Base-ring coefficients are decimal
// strings, extension-ring coefficients arrays of them.
json series_to_json(const MultiSeries& s);
MultiSeries series_from_json(const json& j);

// {"p", "f": "cyclotomic" | "standard" | series}
LTParams lt_params_from_json(const json& j);
json lt_params_to_json(const LTParams& params);

// {"permutation": [...], "entries": [{"i","j","value","modulus_exp"}]}
json change_of_vars_to_json(const ChangeOfVariables& cv);
ChangeOfVariables change_of_vars_from_json(const json& j, std::uint32_t p);

json axiom_report_to_json(const AxiomReport& r);
json scan_report_to_json(const ScanReport& r, bool include_entries = true);
json witness_to_json(const SpecialWitness& w);
json dichotomy_report_to_json(const DichotomyReport& r);
json normalized_sequence_to_json(const NormalizedSequence& ns);

} // namespace prig

#endif
