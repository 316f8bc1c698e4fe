#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bssram {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Carries a 1-based source position; what() already includes it.
class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& message)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

} // namespace bssram
