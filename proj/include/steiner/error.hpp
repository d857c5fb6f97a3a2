#pragma once

#include <stdexcept>
#include <string>

namespace steiner {

// Base class for all domain errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parse failure in a group spec, label, family file or design file.
// line/column are 1-based; 0 means "not applicable".
struct ParseError : Error {
    ParseError(const std::string& msg, int line = 0, int column = 0)
        : Error(locate(msg, line, column)), line(line), column(column) {}

    int line;
    int column;

private:
    static std::string locate(const std::string& msg, int line, int column) {
        if (line <= 0) return msg;
        std::string out = "line " + std::to_string(line);
        if (column > 0) out += ", column " + std::to_string(column);
        return out + ": " + msg;
    }
};

}  // namespace steiner
