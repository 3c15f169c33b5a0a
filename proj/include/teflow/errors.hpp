#ifndef TEFLOW_ERRORS_HPP
#define TEFLOW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace teflow {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input shorter than an operation requires.
class LengthError : public Error {
public:
    using Error::Error;
};

/// Value outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Input that is valid in shape but carries no usable variation.
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

class InsufficientOverlapError : public Error {
public:
    using Error::Error;
};

/// Malformed file content. Carries the 1-based line number when known.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line ? what + " (line " + std::to_string(line) + ")" : what), detail_(what), line_(line) {}
    std::size_t line() const noexcept { return line_; }
    /// The message without the line suffix.
    const std::string& detail() const noexcept { return detail_; }

private:
    std::string detail_;
    std::size_t line_;
};

/// Well-formed content that violates a data contract (e.g. duplicate dates).
class IntegrityError : public Error {
public:
    using Error::Error;
};

/// Unusable configuration; maps to CLI exit code 1.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace teflow

#endif  // TEFLOW_ERRORS_HPP
