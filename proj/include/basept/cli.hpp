// Ideal-file parsing and result rendering for the command-line front end.
#pragma once

#include "basept/basepoints.hpp"

#include <string>

namespace basept {

struct ParseError : Error {
    int line, col;
    ParseError(int l, int c, const std::string& what)
        : Error("parse error at " + std::to_string(l) + ":" + std::to_string(c) + ": " + what),
          line(l), col(c) {}
};

// One polynomial per nonempty, non-comment ('#') line; variables x and y,
// integer or rational coefficients, operators + - * ^ and parentheses.
IdealInput parse_ideal(const std::string& text);

enum class OutputFormat { Text, Json, Dot };

struct RunConfig {
    OutputFormat format = OutputFormat::Text;
    bool intermediates = false;
};

std::string render(const BasePointsResult& result, const IdealInput& ideal, const RunConfig& cfg);

} // namespace basept
