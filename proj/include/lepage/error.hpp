#pragma once

#include <stdexcept>
#include <string>

namespace lepage {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SyntaxError : Error {
    SyntaxError(const std::string& msg, std::size_t pos)
        : Error(msg + " (at position " + std::to_string(pos) + ")"), position(pos) {}
    std::size_t position;
};

struct UnknownIdentifier : Error {
    using Error::Error;
};

struct DomainError : Error {
    using Error::Error;
};

struct DivisionByZero : Error {
    using Error::Error;
};

struct OrderOverflow : Error {
    using Error::Error;
};

struct NonPolynomialIntegrand : Error {
    using Error::Error;
};

struct DegreeOverflow : Error {
    using Error::Error;
};

struct NotAffine : Error {
    using Error::Error;
};

struct HelmholtzViolated : Error {
    using Error::Error;
};

struct ObstructionNonzero : Error {
    using Error::Error;
};

struct NonInvertiblePair : Error {
    using Error::Error;
};

struct DegenerateDegree : Error {
    using Error::Error;
};

struct NotApplicable : Error {
    using Error::Error;
};

struct AccuracyNotReached : Error {
    using Error::Error;
};

struct ValidationError : Error {
    using Error::Error;
};

}  // namespace lepage
