#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rkg {

/// Parse failure in any of the text formats (Turtle, N-Triples, CSV,
/// mapping rules, queries). Carries a 1-based position and a short
/// excerpt of the offending input.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t col, const std::string& message,
               const std::string& excerpt = "");

    std::size_t line() const { return line_; }
    std::size_t col() const { return col_; }
    const std::string& excerpt() const { return excerpt_; }
    const std::string& message() const { return message_; }

private:
    std::size_t line_;
    std::size_t col_;
    std::string message_;
    std::string excerpt_;
};

/// CURIE with a prefix that is not declared.
class ResolveError : public std::runtime_error {
public:
    explicit ResolveError(const std::string& prefix);
    const std::string& prefix() const { return prefix_; }

private:
    std::string prefix_;
};

/// Structurally invalid triple (literal subject or non-IRI predicate).
class StoreError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad schema: subclass cycle, conflicting property kind re-declaration.
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Unreadable or unwritable file.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Requested sheet missing from a workbook.
class SheetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Query evaluation exceeded its deadline.
class EvalTimeout : public std::runtime_error {
public:
    EvalTimeout() : std::runtime_error("query evaluation timed out") {}
};

}  // namespace rkg
