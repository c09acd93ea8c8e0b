#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rkg/graph_store.hpp"
#include "rkg/prefix_map.hpp"
#include "rkg/schema.hpp"

namespace rkg {

/// Sheet grids: 1-based rows, columns addressed by letters (A..Z, AA..).
/// Cells are trimmed strings; missing trailing cells read as empty.
class Workbook {
public:
    using Grid = std::vector<std::vector<std::string>>;

    void add_sheet(const std::string& name, Grid grid);
    bool has_sheet(const std::string& name) const { return sheets_.count(name) != 0; }
    const Grid* find(const std::string& name) const;

    /// Empty string for any cell outside the grid.
    const std::string& cell(const std::string& sheet, long row, int column) const;
    long row_count(const std::string& sheet) const;
    int column_count(const std::string& sheet, long row) const;
    const std::map<std::string, Grid>& sheets() const { return sheets_; }

private:
    std::map<std::string, Grid> sheets_;
};

/// RFC-4180-style CSV: comma delimiter, double-quote quoting with
/// quote-doubling, newlines allowed inside quotes. Cells are trimmed.
/// Throws ParseError (with line number) on an unbalanced quote.
Workbook::Grid parse_csv(std::string_view text);

/// Parses each value as CSV and names the sheet after its key.
Workbook load_workbook(const std::map<std::string, std::string>& csv_by_sheet);

int column_number(const std::string& letters);       // "A" -> 1, "AA" -> 27
std::string column_letters(int number);

/// Cell-text to IRI local name: trim, collapse whitespace runs to '_',
/// drop characters outside letters/digits/'_'/'-'/'.'.
std::string iri_safe_local(const std::string& cell_text);

struct CellRef {
    std::string column;  // row spec is always '*' (the iteration row)
};

struct ValueSpec {
    CellRef ref;
    enum class Qualifier { None, Datatype, Language } qualifier = Qualifier::None;
    std::string qualifier_value;  // datatype CURIE or language tag
};

struct FactClause {
    std::string property;  // CURIE, or bare name resolved in the default namespace
    ValueSpec value;
};

struct Rule {
    std::string sheet;
    std::string start_column;
    std::string end_column;
    long start_row = 1;
    std::optional<long> end_row;  // nullopt = OPEN ('+')
    ValueSpec individual;
    std::vector<std::string> types;
    std::vector<FactClause> facts;
    std::vector<FactClause> annotations;
    std::string comment;
    bool enabled = true;
};

struct RuleSet {
    std::vector<Rule> rules;
};

/// Rule-file format: '#' comment lines; one rule per block, blocks
/// separated by blank lines. Header line
///   RULE <sheet> <startCol>:<endCol> rows <startRow>..<endRow|+> [disabled]
/// followed by body text parsed as
///   "Individual:" valueSpec { "Types:" refs | "Facts:" factList
///                           | "Annotations:" factList | "Comment:" text }
/// Cell references are "@" column "*"; qualifiers "(xsd:...)" or
/// "(xml:lang=\"..\")". Keywords are case-sensitive.
RuleSet parse_rules(std::string_view text);

struct SkippedClause {
    std::string clause;
    std::string reason;
};

struct ProvenanceEntry {
    std::size_t rule_index = 0;  // position in the rule set, 0-based
    std::string sheet;
    long row = 0;
    std::vector<Triple> triples;  // newly inserted by this row
    std::vector<SkippedClause> skipped;
    std::vector<std::string> warnings;
    std::size_t duplicate_emissions = 0;  // re-emissions deduplicated by the store
};

struct ProvenanceLog {
    std::vector<ProvenanceEntry> entries;

    std::size_t triple_count() const;
    std::string to_jsonl() const;
};

struct ApplyResult {
    GraphStore graph;
    ProvenanceLog log;
};

/// Runs every enabled rule over its row range. The individual cell and
/// object-valued fact cells are turned into IRIs under the prefix map's
/// default namespace; facts with a datatype or language qualifier become
/// literals; unqualified facts consult the schema for the property kind
/// (data/annotation -> xsd:string literal, object -> IRI, undeclared ->
/// plain literal plus a warning). Empty cells skip their clause; an empty
/// individual cell skips the row. Everything is logged.
/// Throws SheetError when a rule names a missing sheet.
ApplyResult apply_rules(const RuleSet& rules, const Workbook& wb, const PrefixMap& pm,
                        const SchemaIndex& schema);

}  // namespace rkg
