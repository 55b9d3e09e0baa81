#pragma once

#include <stdexcept>
#include <string>

namespace doilab {

/// Raised when an argument lies outside the domain of an operation
/// (invalid exponent, shape mismatch, empty input, undefined f(λ), ...).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Raised when a request exceeds what an enumeration can handle.
class CapacityError : public std::length_error {
public:
    explicit CapacityError(const std::string& what) : std::length_error(what) {}
};

/// Malformed experiment configuration.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace doilab
