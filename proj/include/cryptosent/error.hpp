#pragma once

#include <stdexcept>
#include <string>

namespace cryptosent {

/// Failure categories; each maps onto one CLI exit status.
enum class ErrorKind {
    Usage = 2,    // bad command line or configuration value
    Data = 3,     // malformed or inconsistent input data
    Numeric = 4,  // gradient check failure, singular system, non-finite values
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }
    int exit_code() const noexcept { return static_cast<int>(kind_); }

private:
    ErrorKind kind_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& message) : Error(ErrorKind::Usage, message) {}
};

class DataError : public Error {
public:
    explicit DataError(const std::string& message) : Error(ErrorKind::Data, message) {}
};

class NumericError : public Error {
public:
    explicit NumericError(const std::string& message) : Error(ErrorKind::Numeric, message) {}
};

}  // namespace cryptosent
