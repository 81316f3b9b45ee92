// Polynomial text -> exact Jet. Grammar: rational coefficients, named
// variables, + - * ^ and parentheses; whitespace-insensitive.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "monores/jet.hpp"

namespace monores {

struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, int line, int col)
        : std::runtime_error(msg + " at line " + std::to_string(line) + ", column " +
                             std::to_string(col)),
          line(line), col(col) {}
    int line, col;
};
struct SyntaxError : ParseError {
    using ParseError::ParseError;
};
struct UnknownVariable : ParseError {
    using ParseError::ParseError;
};
struct NegativeExponent : ParseError {
    using ParseError::ParseError;
};

Jet parse_polynomial(const std::string& text, const std::vector<std::string>& vars);

// Variable names appearing in the text, in first-use order. Lets the CLI infer
// the ambient dimension when no explicit variable list is given.
std::vector<std::string> scan_variables(const std::string& text);

}  // namespace monores
