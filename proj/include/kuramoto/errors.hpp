#pragma once

#include <stdexcept>
#include <string>

namespace kuramoto {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (n < 2, tau = 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Malformed graph, state or config input.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Operation invoked on an input that violates its stated precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Linear algebra or integration failed to produce a usable number.
class NumericError : public Error {
public:
    using Error::Error;
};

/// A certificate's own hypotheses do not hold for the given input, so it says nothing.
class CertificateInapplicable : public Error {
public:
    using Error::Error;
};

} // namespace kuramoto
