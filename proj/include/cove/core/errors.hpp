#pragma once

#include <stdexcept>
#include <string>

namespace cove {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent configuration; reported before any work starts.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed record, completion or file.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Vectors of different dimensionality were combined.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// Input violates a documented precondition of an operation.
class PreconditionError : public Error {
public:
    using Error::Error;
};

}  // namespace cove
