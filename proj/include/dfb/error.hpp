#pragma once

#include <stdexcept>
#include <string>

namespace dfb {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input document (syntax, wrong types, unknown keys).
class ParseError : public Error {
public:
    using Error::Error;
};

/// Well-formed input that violates a domain invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Bad argument to an operation (index out of range, k too large, ...).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// No feasible plan under the requested VRAM budget.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

} // namespace dfb
