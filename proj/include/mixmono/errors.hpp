#pragma once

#include <stdexcept>
#include <string>

namespace mixmono {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Interval construction with lo not below hi.
class InvalidInterval : public Error {
public:
    using Error::Error;
};

/// Two operators (or an operator and an element) belong to different universes.
class UniverseMismatch : public Error {
public:
    using Error::Error;
};

/// A coupled iteration was started from a pair with x0 not below y0.
class PreconditionOrder : public Error {
public:
    using Error::Error;
};

/// The iteration produced a step violating an order relation the mixed
/// monotone contract guarantees; the operator is not mixed monotone on the
/// visited region.
class MonotonicityViolation : public Error {
public:
    using Error::Error;
};

/// The operator returned different outputs for equal inputs.
class NondeterministicOperator : public Error {
public:
    using Error::Error;
};

/// Exhaustive checking was requested on a universe without an element list.
class InfiniteUniverseExhaustive : public Error {
public:
    using Error::Error;
};

/// Vectors of different lengths were combined.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// A nonzero cone element was required.
class ZeroElement : public Error {
public:
    using Error::Error;
};

/// Two cone elements required to lie in the same part are not linked.
class NotLinked : public Error {
public:
    using Error::Error;
};

/// A scaling exponent left the double range; the solver refuses to degrade.
class Underflow : public Error {
public:
    using Error::Error;
};

/// The per-step certificate x_n >= lambda_n * y_n failed; the declared phi
/// condition does not hold for the operator being solved.
class CertificateViolation : public Error {
public:
    using Error::Error;
};

/// The solver hit its step limit before meeting either stop criterion.
class NonConvergence : public Error {
public:
    using Error::Error;
};

/// A matrix or table has inconsistent dimensions.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// A problem file failed validation.
class MalformedProblem : public Error {
public:
    using Error::Error;
};

}  // namespace mixmono
