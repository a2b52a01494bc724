#pragma once

#include <stdexcept>
#include <string>

namespace tabpred {

// Base error for everything that can go wrong at runtime (bad data files,
// degenerate fits, unwritable paths). The CLI maps it to exit code 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised when a config, schema or argument is malformed before any real work
// starts. The CLI maps it to exit code 1.
class ValidationError : public Error {
public:
    using Error::Error;
};

} // namespace tabpred
