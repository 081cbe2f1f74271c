#pragma once

#include <stdexcept>
#include <string>

namespace udwcp {

/// Malformed or out-of-range configuration (bad JSON, unknown key, L <= 0, ...).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Argument outside the domain of an operation (position outside the cavity,
/// negative interaction time, cloud sticking out of the cavity, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The requested series diverges for this configuration (pointlike detector
/// with a nonzero diamagnetic term).
class DivergenceError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Fidelity a_N / S_N requested with S_N = 0.
class UndefinedFidelityError : public DomainError {
public:
    using DomainError::DomainError;
};

/// A series term evaluated to NaN or +-inf.
class NonFiniteTermError : public std::runtime_error {
public:
    NonFiniteTermError(long index, double value)
        : std::runtime_error("non-finite series term at n=" + std::to_string(index) + " (" +
                             std::to_string(value) + ")"),
          index_(index) {}

    [[nodiscard]] long index() const noexcept { return index_; }

private:
    long index_;
};

}  // namespace udwcp
