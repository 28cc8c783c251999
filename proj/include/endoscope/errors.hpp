#pragma once

#include <stdexcept>
#include <string>

namespace endoscope {

// Raised when a p-adic query needs digits that are no longer trusted.
class PrecisionError : public std::runtime_error {
public:
    explicit PrecisionError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an identity that must hold is found to fail.
class VerificationError : public std::runtime_error {
public:
    explicit VerificationError(const std::string& what) : std::runtime_error(what) {}
};

// Input outside an operation's domain (bad parameters, element not in a subgroup, ...).
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace endoscope
