#pragma once

#include <stdexcept>
#include <string>

namespace relcert {

/// Malformed input: bad documents, invalid arguments, violated preconditions.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Enumeration would exceed the configured budget.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

/// A theorem-backed internal check failed. Should be unreachable on valid
/// inputs; reaching it means a bug, so the message carries the witness.
class TheoryViolation : public std::logic_error {
public:
    explicit TheoryViolation(const std::string& what) : std::logic_error(what) {}
};

/// A machine-checkable certificate (witness bundle, trace replay) failed
/// verification. Expected on tampered or stale data.
class VerificationError : public std::runtime_error {
public:
    explicit VerificationError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace relcert
