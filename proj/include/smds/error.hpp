#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace smds {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed text input. line() is 1-based; 0 when no single line is at fault.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Well-formed input that violates a precondition (disconnected graph,
// asymmetric matrix, dimension mismatch, missing file).
class InputError : public Error {
public:
    using Error::Error;
};

// Gradient singularities and non-finite values.
class NumericalError : public Error {
public:
    using Error::Error;
};

} // namespace smds
