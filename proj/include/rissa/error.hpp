#pragma once

#include <stdexcept>
#include <string>

namespace rissa {

// Base of every error raised by the library. Numeric failures are reported
// by exception; callers that sweep parameters (the runner) catch per row.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of a function.
class DomainError : public Error {
public:
    using Error::Error;
};

// Gamma-type factor evaluated at (or numerically on top of) one of its poles.
class PoleError : public Error {
public:
    using Error::Error;
};

// No vertical line separates the two pole families, or a supplied abscissa
// fails to separate them.
class ContourError : public Error {
public:
    using Error::Error;
};

// An iterative or adaptive procedure ran out of budget before reaching its
// tolerance.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

// Parameters are valid but numerically degenerate (e.g. a gamma shape that
// diverges because the variance collapses).
class ConditioningError : public Error {
public:
    using Error::Error;
};

}  // namespace rissa
