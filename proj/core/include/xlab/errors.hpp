#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace xlab {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shape or size mismatch between operands.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Invalid argument value (negative fraction, snr <= 0, index out of range, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Malformed file content; carries the byte offset where parsing failed.
class FormatError : public Error {
public:
    FormatError(const std::string& msg, std::size_t byte_offset)
        : Error(msg + " (byte offset " + std::to_string(byte_offset) + ")"),
          offset(byte_offset) {}
    std::size_t offset;
};

/// An API precondition between cooperating calls was violated
/// (e.g. a backward pass fed a cache from a different forward pass).
class ContractError : public Error {
public:
    using Error::Error;
};

/// Non-finite values or a numerically unusable problem.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Weighted design matrix is singular and no ridge term was requested.
class IllConditionedError : public NumericError {
public:
    using NumericError::NumericError;
};

/// Training produced a non-finite loss; remembers the epoch it happened in.
class DivergedError : public NumericError {
public:
    DivergedError(const std::string& msg, std::size_t at_epoch)
        : NumericError(msg + " (epoch " + std::to_string(at_epoch) + ")"),
          epoch(at_epoch) {}
    std::size_t epoch;
};

/// All neighborhood weights collapsed below the usable threshold.
class KernelError : public Error {
public:
    using Error::Error;
};

/// Config file / flag validation failure; message names the key (and line).
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace xlab
