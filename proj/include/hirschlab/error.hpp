#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hirschlab {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ArithmeticError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

/// Malformed text input. `line()` is 1-based, or 0 when not tied to a line.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& what, std::size_t line = 0)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line)
    {
    }
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Data that parses but violates a structural requirement (missing dataset,
/// unknown label, corrupted apex system, unbounded input to enumeration).
class DataError : public Error {
public:
    using Error::Error;
};

/// A deep computation ran past its wall-clock budget.
class BudgetExhausted : public Error {
public:
    BudgetExhausted(const std::string& what, std::size_t progress)
        : Error(what), progress_(progress)
    {
    }
    std::size_t progress() const { return progress_; }

private:
    std::size_t progress_;
};

}  // namespace hirschlab
