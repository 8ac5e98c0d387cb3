#pragma once

#include <stdexcept>
#include <string>

namespace mawarith {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or structurally invalid input (bad fraction, illegal heir set, ...).
class InputError : public Error {
public:
    using Error::Error;
};

/// Division by zero or integer overflow inside exact arithmetic.
class ArithmeticError : public Error {
public:
    using Error::Error;
};

/// A rule profile, template bank or run configuration cannot serve the request.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// The generator could not reach its quota of unique cases.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// Lookup of an unknown document id, or an index that was never built.
class LookupError : public Error {
public:
    using Error::Error;
};

/// HTTP transport failed after the retry budget was spent.
class TransportError : public Error {
public:
    TransportError(const std::string& what, int last_status)
        : Error(what), last_status_(last_status) {}
    int last_status() const noexcept { return last_status_; }

private:
    int last_status_;
};

/// The endpoint answered, but not in the expected shape.
class ProtocolError : public Error {
public:
    using Error::Error;
};

/// Persisted data (corpus, index, archive) could not be decoded.
class FormatError : public Error {
public:
    using Error::Error;
};

}  // namespace mawarith
