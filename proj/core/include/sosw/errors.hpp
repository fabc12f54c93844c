#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace sosw {

/// Syntax error raised by the language parsers. Positions are 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string message, std::size_t line, std::size_t col, std::vector<std::string> expected = {})
        : std::runtime_error(format(message, line, col, expected)), message_(std::move(message)), line_(line),
          col_(col), expected_(std::move(expected))
    {
    }

    [[nodiscard]] const std::string& message() const { return message_; }
    [[nodiscard]] std::size_t line() const { return line_; }
    [[nodiscard]] std::size_t col() const { return col_; }
    [[nodiscard]] const std::vector<std::string>& expected() const { return expected_; }

private:
    static std::string format(const std::string& message, std::size_t line, std::size_t col,
                              const std::vector<std::string>& expected)
    {
        std::string out = "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + message;
        if (!expected.empty()) {
            out += " (expected ";
            for (std::size_t i = 0; i < expected.size(); ++i) {
                if (i > 0)
                    out += i + 1 == expected.size() ? " or " : ", ";
                out += expected[i];
            }
            out += ")";
        }
        return out;
    }

    std::string message_;
    std::size_t line_;
    std::size_t col_;
    std::vector<std::string> expected_;
};

/// A language's step relation refused a state (unbound variable, ill-formed input for a widget...).
class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An exploration or comparison bound was hit where a complete answer was required.
class LimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace sosw
