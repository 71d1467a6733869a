#pragma once

#include <stdexcept>
#include <string>

namespace levyob {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Complex logarithm argument crossed the negative real axis; the requested
/// point lies outside the model's analyticity strip.
class BranchError : public Error {
public:
    using Error::Error;
};

/// A tail integral failed the exponential-moment test.
class DivergentIntegral : public Error {
public:
    using Error::Error;
};

/// Exponential-moment condition fails; the martingale condition cannot be met.
class MomentError : public Error {
public:
    using Error::Error;
};

/// Nonpositive small-jump truncation level.
class TruncationError : public Error {
public:
    using Error::Error;
};

/// A nonlocal evaluation left the extended domain without an extension rule.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Iterative solver exhausted its iteration budget.
class NoConvergence : public Error {
public:
    NoConvergence(const std::string& msg, int iterations, double damping)
        : Error(msg), iterations(iterations), damping(damping) {}
    int iterations;
    double damping;  // reducing this is the usual remedy
};

/// Evolution time step violates the explicit-jump stability bound.
class StabilityError : public Error {
public:
    using Error::Error;
};

/// Terminal condition g < obstacle at expiry somewhere on the grid.
class CompatibilityError : public Error {
public:
    using Error::Error;
};

/// All moduli of continuity below noise floor; no exponent can be fitted.
class DegenerateFit : public Error {
public:
    using Error::Error;
};

/// Configuration failed schema validation.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace levyob
