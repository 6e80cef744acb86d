#pragma once

#include <stdexcept>
#include <string>

namespace grafl {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file. Carries the 1-based line number when known (0 otherwise).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Invalid hyperparameters or option values.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A learned function cannot be evaluated on the given graph.
class TransferError : public Error {
public:
    using Error::Error;
};

/// Serialized function file does not match the expected schema or version.
class SchemaError : public Error {
public:
    using Error::Error;
};

}  // namespace grafl
