// Copyright 2026 The prig Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PRIG_ERRORS_HPP
#define PRIG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace prig {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A requested result needs more p-adic digits (or a larger degree bound)
// than the inputs carry.
class PrecisionError : public Error {
public:
    using Error::Error;
};

// Operands live in different coefficient rings or have different shapes.
class MismatchError : public Error {
public:
    using Error::Error;
};

// Violated precondition on the mathematical input (not Eisenstein, nonzero
// constant term in a substitution, invalid Lubin-Tate polynomial, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Malformed serialized input (JSON shape, number syntax, unknown names).
class ParseError : public Error {
public:
    using Error::Error;
};

} // namespace prig

#endif
