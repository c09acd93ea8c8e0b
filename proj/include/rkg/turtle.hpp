#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rkg/graph_store.hpp"
#include "rkg/prefix_map.hpp"
#include "rkg/term.hpp"

namespace rkg {

struct ParsedDoc {
    std::vector<Triple> triples;
    PrefixMap prefixes;
};

/// Turtle subset: @prefix / PREFIX directives, 'a', ';' and ',' lists,
/// IRIs, CURIEs, quoted literals with ^^datatype and @lang suffixes,
/// numeric and boolean shorthand, blank-node labels, comments.
/// Throws ParseError with 1-based line/column and a token excerpt.
ParsedDoc parse_turtle(std::string_view text);

/// Parses `text` and inserts every triple; document prefixes merge into
/// the store's prefix map.
void load_turtle(GraphStore& store, std::string_view text);

/// Deterministic output: prefixes sorted by label, triples grouped by
/// subject, subjects/predicates/objects ordered by their canonical
/// N-Triples form. Output re-parses to the same triple set.
std::string serialize_turtle(const GraphStore& store);

/// Line-oriented N-Triples (full IRIs only).
std::vector<Triple> parse_ntriples(std::string_view text);
void load_ntriples(GraphStore& store, std::string_view text);

/// Canonical N-Triples: one sorted line per triple, datatypes always
/// explicit except on language-tagged strings.
std::string serialize_ntriples(const GraphStore& store);

/// Parses one canonical N-Triples term ("<iri>", "_:b", quoted literal).
Term parse_ntriples_term(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);
void load_turtle_file(GraphStore& store, const std::string& path);
void load_ntriples_file(GraphStore& store, const std::string& path);

}  // namespace rkg
