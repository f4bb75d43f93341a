#pragma once

#include <stdexcept>
#include <string>

namespace glevy {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed arguments: empty sets, wrong dimensions, bad parameters.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// Time interval with s >= t or outside [0, T].
class InvalidInterval : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

/// A control policy that does not cover the horizon or leaves the admissible set.
class InvalidPolicy : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

/// A user supplied function returned a non-finite value.
class EvaluationError : public Error {
public:
    using Error::Error;
};

/// A documented precondition does not hold (e.g. v(A) = 0 for an enumerated v).
class PreconditionViolation : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

/// Feature outside the supported envelope (d > 1 transport, incomparable vector means, ...).
class Unsupported : public Error {
public:
    using Error::Error;
};

/// Numerical abort: CFL violation, NaN in the scheme, resource bound exceeded.
class NumericalError : public Error {
public:
    using Error::Error;
};

class CflViolation : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace glevy
