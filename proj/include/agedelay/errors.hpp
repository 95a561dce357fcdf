#pragma once

#include <stdexcept>
#include <string>

namespace agedelay
{

/// Argument outside the mathematical domain of an operation (negative age,
/// negative density, a > A_l, ...).
class DomainError : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

/// A requested accuracy cannot be certified (e.g. spectral series too long).
class AccuracyError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Iterative solve did not converge or its bracket is inconsistent.
class ConvergenceError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Exponent would overflow double range.
class RangeError : public std::range_error
{
public:
    using std::range_error::range_error;
};

/// Allocation would exceed a configured memory budget.
class ResourceError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite values appeared in the simulated state.
class StateError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// A mathematical guarantee was contradicted by the numerics (usually a bad
/// ceiling M or a birth function that breaks its own hypotheses).
class InconsistencyError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Operation not available for this kind of object.
class UnsupportedError : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

/// Invalid or incomplete configuration; the message names the offending key.
class ConfigError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace agedelay
