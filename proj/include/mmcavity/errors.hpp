#pragma once

#include <stdexcept>
#include <string>

namespace mmcavity {

/// Invalid argument outside the physical/mathematical domain of an operation.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Degenerate or ill-formed cavity layout (membrane at a mirror, coincident
/// membranes, unordered positions).
class GeometryError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed run configuration (unknown keys, bad ranges, missing fields).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed to produce a trustworthy result.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A closed-form expression was evaluated at a point where its denominator
/// vanishes; carries the offending denominator value.
class SingularPointError : public NumericalError {
public:
    SingularPointError(const std::string& msg, double denominator)
        : NumericalError(msg), denominator_(denominator) {}
    double denominator() const { return denominator_; }

private:
    double denominator_;
};

/// A finite-difference stencil straddles a feature the step cannot resolve
/// (detected by Richardson inconsistency between steps h and h/2).
class StencilError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace mmcavity
