#pragma once

#include <stdexcept>
#include <string>

namespace ixrl {

// Every error raised by the library derives from Error so callers can map
// failures onto exit codes without string matching.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class UsageError : public Error {
public:
    using Error::Error;
};

class NumericError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class SchemaError : public Error {
public:
    using Error::Error;
};

class ProvenanceError : public Error {
public:
    using Error::Error;
};

// Raised when replaying a recorded episode does not reproduce the trace.
class IntegrityError : public Error {
public:
    using Error::Error;
};

}  // namespace ixrl
