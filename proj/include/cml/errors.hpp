#pragma once

#include <stdexcept>
#include <string>

namespace cml {

/// Invalid parameters, ranges, or flags.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An observable was requested on a state flagged divergent.
class DivergentStateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Not enough usable histogram bins (or samples) to fit.
class InsufficientDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Quantity is mathematically undefined for the input
/// (zero-variance correlation, Gini of an all-zero state).
class UndefinedError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace cml
