#pragma once

#include <stdexcept>
#include <string>

namespace ewc {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Shape disagreements between tensors, parameter vectors, datasets.
class DimensionError : public Error {
public:
    using Error::Error;
};

// Overflow / NaN detected in a loss, gradient or probability.
class NumericsError : public Error {
public:
    using Error::Error;
};

// Unknown or missing task-context id.
class ContextError : public Error {
public:
    using Error::Error;
};

// Filesystem and serialization failures.
class IoError : public Error {
public:
    using Error::Error;
};

// IDX loader failures, kept distinct so callers can tell them apart.
class BadMagicError : public IoError {
public:
    using IoError::IoError;
};

class TruncatedFileError : public IoError {
public:
    using IoError::IoError;
};

class CountMismatchError : public IoError {
public:
    using IoError::IoError;
};

// Invalid experiment configuration (bad field values, missing files).
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace ewc
