#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stratum {

/// Base class for all domain errors raised by the library. Semi-decidable
/// questions never throw; they return Unknown-style values instead. An
/// exception here always means a caller-visible precondition failed.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Reciprocal requested without a valid apartness-from-zero witness.
class ApartnessError : public Error {
public:
    explicit ApartnessError(const std::string& what) : Error(what) {}
};

/// A point was certified to lie outside a function's domain.
class DomainViolation : public Error {
public:
    explicit DomainViolation(const std::string& what) : Error(what) {}
};

/// Root isolation requires a sign change over the bracketing interval.
class NoSignChangeError : public Error {
public:
    explicit NoSignChangeError(const std::string& what) : Error(what) {}
};

/// A linear functional was certified to exceed its sublinear bound.
class DominanceViolated : public Error {
public:
    explicit DominanceViolated(const std::string& what) : Error(what) {}
};

/// An extension step was asked to use a coefficient that was certified
/// to lie outside the admissible interval.
class ChoiceOutsideInterval : public Error {
public:
    explicit ChoiceOutsideInterval(const std::string& what) : Error(what) {}
};

/// A top-level expression contains a variable not bound by any binder.
class OpenExpressionError : public Error {
public:
    explicit OpenExpressionError(const std::string& what) : Error(what) {}
};

/// An expression node is outside the fragment an operation supports
/// (for example a variable-dependent divisor under a binder).
class UnsupportedNodeError : public Error {
public:
    explicit UnsupportedNodeError(const std::string& what) : Error(what) {}
};

/// Lexical or syntactic failure. `position` is the 1-based byte offset of
/// the offending input; `expected` names the token class the parser wanted.
class ParseError : public Error {
public:
    ParseError(std::size_t position, std::string expected)
        : Error("parse error at byte " + std::to_string(position) +
                ": expected " + expected),
          position(position),
          expected(std::move(expected)) {}

    std::size_t position;
    std::string expected;
};

} // namespace stratum
