#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace signfull {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation (zero norm, |rho| >= 1, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Mismatched dimensions or sketch lengths.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration values.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// An operation was asked for something its inputs cannot provide,
/// e.g. a full-data estimator against a store of signs.
class ContractError : public Error {
public:
    using Error::Error;
};

/// Data that carries no information for an estimator (all-zero query side).
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

/// Malformed binary sketch file.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Malformed sparse text input; carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace signfull
