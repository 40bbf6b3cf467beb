#pragma once

#include <stdexcept>
#include <string>

namespace stacool {

// Invalid or inconsistent user-facing configuration. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Evaluation requested outside a function's stated domain (e.g. time outside
// the simulation window, negative occupation).
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// A quantity that must be nonzero vanished (g0 = 0, degenerate spectrum, ...).
class SingularityError : public std::runtime_error {
public:
    explicit SingularityError(const std::string& what) : std::runtime_error(what) {}
};

// Time integration failed (step-size underflow, NaN state, tolerance not met).
// Maps to CLI exit code 3.
class IntegrationError : public std::runtime_error {
public:
    explicit IntegrationError(const std::string& what) : std::runtime_error(what) {}
};

// Truncated Fock basis too small for the state it is asked to hold.
class TruncationError : public std::runtime_error {
public:
    explicit TruncationError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace stacool
