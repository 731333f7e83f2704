#pragma once

#include <stdexcept>
#include <string>

namespace hvrfif {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input rejected by a validation rule (dataset, partition, config, grid size).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Factor expression text that does not match the grammar.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " at position " + std::to_string(position)), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// Arithmetic failure while evaluating a factor expression.
class EvalError : public Error {
public:
    using Error::Error;
};

/// Internal invariant broken; indicates a bug rather than bad input.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace hvrfif
