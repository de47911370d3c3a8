#pragma once

#include <stdexcept>
#include <string>

namespace vmk {

// Error taxonomy maps onto CLI exit codes: ConfigError -> 2, IoError -> 3,
// NumericError -> 4.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConfigError : Error {
    using Error::Error;
};

// Bad geometry: indivisible dims, token count mismatch, length overflow.
struct ShapeError : ConfigError {
    using ConfigError::ConfigError;
};

// Sequence template contract violations (empty caption, wrong view count, ...).
struct TemplateError : ConfigError {
    using ConfigError::ConfigError;
};

struct IoError : Error {
    using Error::Error;
};

// Distinct checkpoint load failures.
struct CkptVersionError : IoError {
    using IoError::IoError;
};
struct CkptTruncatedError : IoError {
    using IoError::IoError;
};
struct CkptShapeError : IoError {
    using IoError::IoError;
};

struct NumericError : Error {
    using Error::Error;
};

}  // namespace vmk
