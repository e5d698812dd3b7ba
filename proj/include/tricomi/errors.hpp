#pragma once

#include <stdexcept>
#include <string>

namespace tricomi {

/// Base of every error the library throws. The C API maps each subclass
/// onto one status code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Exponent outside the range a theorem or engine covers
/// (e.g. supercritical p handed to the subcritical iteration).
class ScopeError : public Error {
public:
    using Error::Error;
};

/// Invalid run configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure failed to reach its tolerance.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Adaptive integrator step size collapsed.
class StiffnessError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Not enough usable data for a fit.
class FitError : public Error {
public:
    using Error::Error;
};

} // namespace tricomi
