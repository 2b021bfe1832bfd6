#pragma once

#include <stdexcept>
#include <string>

namespace l2ext {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A point lies outside the closed polydisc.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent input (config file, model data, empty families).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Gram matrix failed to factor; carries the smallest pivot seen.
class ConditioningError : public Error {
public:
    ConditioningError(const std::string& what, double smallest_pivot)
        : Error(what), smallest_pivot_(smallest_pivot) {}
    double smallest_pivot() const noexcept { return smallest_pivot_; }

private:
    double smallest_pivot_;
};

/// Integrand produced a non-finite value at a quadrature node.
class SingularIntegrandError : public Error {
public:
    using Error::Error;
};

/// Singular weight is not one of the built-in model families.
class UnsupportedModelError : public Error {
public:
    using Error::Error;
};

/// Coefficient vector refers to a monomial that is not in the truncated basis.
class DegreeError : public Error {
public:
    using Error::Error;
};

/// Requested level set reaches the domain boundary.
class RangeError : public Error {
public:
    using Error::Error;
};

}  // namespace l2ext
