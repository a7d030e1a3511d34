#pragma once

#include <stdexcept>
#include <string>

namespace capmdp {

/// Base class of all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or non-conforming input file.
class SchemaError : public Error {
public:
    using Error::Error;
};

/// The instance violates one of the model invariants.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Strategy/instance shapes disagree.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Bad parameter passed to an operation (out of domain, etc).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// The constructive sampler could not produce a rule-satisfying draw.
class RejectionLimitExceeded : public Error {
public:
    using Error::Error;
};

/// No capacity-feasible strategy exists.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

/// A solver stopped on its node or time limit before proving optimality.
class LimitExceeded : public Error {
public:
    using Error::Error;
};

/// Ratio-type statistic with a zero denominator.
class DivisionByZero : public Error {
public:
    using Error::Error;
};

} // namespace capmdp
