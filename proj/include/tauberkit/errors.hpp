#pragma once

#include <stdexcept>
#include <string>

namespace tk {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Evaluation at a pole of a meromorphic function.
class PoleError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Malformed input: empty grids, inconsistent parameters, violated preconditions.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Requested accuracy not reachable. Carries the best value obtained.
class PrecisionError : public std::runtime_error {
public:
    PrecisionError(const std::string& what, double partial_value = 0.0)
        : std::runtime_error(what), partial_(partial_value) {}
    [[nodiscard]] double partial_value() const noexcept { return partial_; }

private:
    double partial_;
};

}  // namespace tk
