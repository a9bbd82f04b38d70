#pragma once

#include <stdexcept>
#include <string>

namespace ivalkit {

/// Base class for all ivalkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed interval constructor call: inf > sup, NaN endpoint,
/// inf = +oo, sup = -oo, or an endpoint not representable in the format.
struct InvalidIntervalError : Error {
    using Error::Error;
};

/// Point evaluation requested outside the closed natural domain.
struct DomainError : Error {
    using Error::Error;
};

/// The adaptive loop hit its precision cap without endpoint agreement.
/// Deliberately fatal: a silently widened reference result would corrupt
/// every verdict derived from it.
struct PrecisionExhaustedError : Error {
    using Error::Error;
};

/// A pair lacks the accurate-mode envelope yet the observed result is a
/// strict superset of the expected one, so accurate cannot be told apart
/// from merely valid.
struct MissingEnvelopeError : Error {
    using Error::Error;
};

/// Pair-file syntax error; carries the offending 1-based line number.
struct ParseError : Error {
    ParseError(std::size_t line, const std::string& reason)
        : Error("line " + std::to_string(line) + ": " + reason), line(line) {}
    std::size_t line;
};

} // namespace ivalkit
