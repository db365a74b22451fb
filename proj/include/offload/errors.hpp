#pragma once

#include <stdexcept>
#include <string>

namespace offload {

/// Base of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An action violates the one-network, capacity, or remaining-size rules.
class FeasibilityError : public Error {
public:
    using Error::Error;
};

/// Invalid scenario or configuration input.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A state space or search tree exceeds its budget.
class SizingError : public Error {
public:
    using Error::Error;
};

/// A policy table was queried outside its domain.
class LookupError : public Error {
public:
    using Error::Error;
};

/// Table construction invariant broken; indicates a bug.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

/// Numeric input outside a function's domain.
class DomainError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace offload
