#pragma once

#include <stdexcept>
#include <string>

namespace hawkamp {

/// Base for every error raised by the physics modules. `module()` names the
/// module that rejected the input so callers can report provenance.
class Error : public std::runtime_error {
public:
    Error(std::string module, const std::string& what)
        : std::runtime_error(what), module_(std::move(module)) {}

    const std::string& module() const noexcept { return module_; }
    virtual const char* kind() const noexcept = 0;

private:
    std::string module_;
};

/// Argument outside the mathematical domain of an operation (r <= 1 for a
/// horizon-divergent quantity, negative variance, ...).
class DomainError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "domain"; }
};

/// Malformed input data: unnormalized probabilities, NaN samples, bad weights.
class InputError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "input"; }
};

/// A documented precondition of the operation does not hold (e.g. the
/// resonance requirement for pulse timing).
class PreconditionError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "precondition"; }
};

/// Mirror placed at or inside the innermost stable circular orbit.
class StabilityError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "stability"; }
};

/// Numerical integration or quadrature failed to converge.
class NumericError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "numeric"; }
};

}  // namespace hawkamp
