#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lhvlp {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A request that would exceed a hard resource cap (memory, strategy count).
class ResourceError : public std::runtime_error {
public:
    ResourceError(const std::string& what, std::size_t required_bytes)
        : std::runtime_error(what), required_bytes_(required_bytes) {}

    std::size_t required_bytes() const noexcept { return required_bytes_; }

private:
    std::size_t required_bytes_;
};

/// Malformed input data (files, measured tensors).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Parse failure with a 1-based source position.
class ParseError : public ValidationError {
public:
    ParseError(const std::string& msg, std::size_t line, std::size_t column)
        : ValidationError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
          line_(line),
          column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// The LP solver could not certify a solution.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace lhvlp
