#pragma once

#include <stdexcept>
#include <string>

namespace pac {

/// Malformed input text: model files, predicate strings, config files.
class SyntaxError : public std::runtime_error {
public:
    SyntaxError(const std::string& what, int line, int column)
        : std::runtime_error(format(what, line, column)), line_(line), column_(column)
    {
    }

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    static std::string format(const std::string& what, int line, int column)
    {
        return std::to_string(line) + ":" + std::to_string(column) + ": " + what;
    }

    int line_;
    int column_;
};

/// A structurally well-formed model that breaks a model invariant.
class ValidationError : public std::runtime_error {
public:
    ValidationError(std::string invariant, const std::string& detail)
        : std::runtime_error(invariant + ": " + detail), invariant_(std::move(invariant))
    {
    }

    const std::string& invariant() const noexcept { return invariant_; }

private:
    std::string invariant_;
};

/// A query whose preconditions do not hold (empty roots, cause inside roots, ...).
class QueryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Path enumeration or generation exceeded a configured cap.
class GuardExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace pac
