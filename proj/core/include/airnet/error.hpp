#pragma once

#include <stdexcept>
#include <string>

namespace airnet {

/// Coarse error categories, mapped to process exit codes by the CLI
/// (config = 2, parse = 3, computation = 4).
enum class ErrorKind { config, parse, computation };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& message)
        : Error(ErrorKind::config, message) {}
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& message)
        : Error(ErrorKind::parse, message) {}

    ParseError(const std::string& file, int line, const std::string& message)
        : Error(ErrorKind::parse, file + ":" + std::to_string(line) + ": " + message) {}
};

class ComputationError : public Error {
public:
    explicit ComputationError(const std::string& message)
        : Error(ErrorKind::computation, message) {}
};

/// Input values outside the mathematical domain of an operation
/// (e.g. nonpositive values fed to a log-space fit).
class DomainError : public ComputationError {
public:
    explicit DomainError(const std::string& message) : ComputationError(message) {}
};

/// The input admits no unique answer (zero variance, uniform adjacency, ...).
class DegenerateError : public ComputationError {
public:
    explicit DegenerateError(const std::string& message) : ComputationError(message) {}
};

class InsufficientDataError : public ComputationError {
public:
    explicit InsufficientDataError(const std::string& message) : ComputationError(message) {}
};

}  // namespace airnet
