#include "rkg/errors.hpp"

namespace rkg {

namespace {

std::string format_parse_error(std::size_t line, std::size_t col, const std::string& message,
                               const std::string& excerpt) {
    std::string out = "line " + std::to_string(line) + ", col " + std::to_string(col) + ": " +
                      message;
    if (!excerpt.empty()) out += " (near '" + excerpt + "')";
    return out;
}

}  // namespace

ParseError::ParseError(std::size_t line, std::size_t col, const std::string& message,
                       const std::string& excerpt)
    : std::runtime_error(format_parse_error(line, col, message, excerpt)),
      line_(line),
      col_(col),
      message_(message),
      excerpt_(excerpt) {}

ResolveError::ResolveError(const std::string& prefix)
    : std::runtime_error("unknown prefix '" + prefix + ":'"), prefix_(prefix) {}

}  // namespace rkg
