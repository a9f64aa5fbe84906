#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace lsvwip {

/// Argument outside the mathematical domain of an operation (e.g. x outside [0,1]).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Malformed input object or configuration.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A theorem hypothesis the caller asked us to rely on does not hold (e.g. phi(0) == 0).
class HypothesisError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Root finder, quadrature or bisection failed to reach the requested accuracy.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Not enough data for a statistical estimate to be meaningful.
class StatisticalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A return-time search hit its cap. Carries the number of iterations performed.
class TruncationError : public std::runtime_error {
public:
    TruncationError(const std::string& what, std::uint64_t partial_count)
        : std::runtime_error(what), partial_count_(partial_count) {}

    std::uint64_t partial_count() const noexcept { return partial_count_; }

private:
    std::uint64_t partial_count_;
};

/// Return partition failed its spot check.
class PartitionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace lsvwip
