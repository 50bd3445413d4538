#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ccstab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A configured size limit was exceeded. `cap()` names the limit.
class CapExceeded : public Error {
public:
    CapExceeded(std::string cap, std::size_t value, std::size_t limit)
        : Error("cap exceeded: " + cap + " (" + std::to_string(value) + " > " + std::to_string(limit) +
                "); raise it with CCSTAB_CAP_OVERRIDE"),
          cap_(std::move(cap)) {}
    const std::string& cap() const noexcept { return cap_; }

private:
    std::string cap_;
};

/// Malformed text input, with 1-based position.
class FormatError : public Error {
public:
    FormatError(const std::string& msg, std::size_t line, std::size_t column = 0)
        : Error("line " + std::to_string(line) + (column ? ", column " + std::to_string(column) : "") + ": " + msg),
          line_(line), column_(column) {}
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// An argument violated an operation's precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

}  // namespace ccstab
