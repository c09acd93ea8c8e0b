#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rkg/graph_store.hpp"
#include "rkg/prefix_map.hpp"
#include "rkg/term.hpp"

namespace rkg {

struct Variable {
    std::string name;  // without the '?'
    auto operator<=>(const Variable&) const = default;
};

using TermOrVar = std::variant<Term, Variable>;

struct TriplePattern {
    TermOrVar subject;
    TermOrVar predicate;
    TermOrVar object;
};

/// Filter expressions: comparisons over variables and literals, BOUND,
/// and three-valued logical connectives.
struct Expression {
    enum class Kind { Compare, Bound, And, Or, Not, Value };

    Kind kind = Kind::Value;
    std::string op;  // Compare only: = != < <= > >=
    std::shared_ptr<Expression> lhs;
    std::shared_ptr<Expression> rhs;
    std::optional<Variable> var;  // Bound, or a Value holding a variable
    std::optional<Term> term;     // Value holding a constant
};

struct GroupPattern;

struct OptionalPattern {
    std::shared_ptr<GroupPattern> group;
};

struct UnionPattern {
    std::shared_ptr<GroupPattern> left;
    std::shared_ptr<GroupPattern> right;  // n-ary unions nest left
};

struct FilterPattern {
    std::shared_ptr<Expression> expr;
};

using PatternElement = std::variant<TriplePattern, OptionalPattern, UnionPattern, FilterPattern>;

struct GroupPattern {
    std::vector<PatternElement> elements;
};

struct OrderKey {
    Variable var;
    bool ascending = true;
};

struct QueryAST {
    PrefixMap prefixes;
    bool distinct = false;
    bool select_all = false;
    std::vector<Variable> projection;
    GroupPattern pattern;
    std::vector<OrderKey> order_by;
    std::optional<std::size_t> limit;
    std::optional<std::size_t> offset;
};

/// SELECT queries with a PREFIX prologue, DISTINCT, '*' or a variable
/// list, basic graph patterns using 'a' / ';' / ',', OPTIONAL, UNION,
/// FILTER, ORDER BY (bare, parenthesized, ASC()/DESC() keys), and
/// LIMIT/OFFSET. Throws ParseError with position information.
QueryAST parse_query(std::string_view text);

/// Bag of solutions: fixed header, one cell per variable per row,
/// UNBOUND cells empty.
struct SolutionTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::optional<Term>>> rows;
};

struct EvalOptions {
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

/// Bag semantics. BGPs join through the store indexes; OPTIONAL is a left
/// outer join; UNION concatenates branch solutions over the union of
/// in-scope variables; FILTER applies three-valued logic at the end of
/// its group; ORDER BY sorts unbound first, numeric-looking literal pairs
/// numerically, everything else by codepoint with IRIs after literals
/// (stable); DISTINCT deduplicates projected rows; LIMIT/OFFSET run last.
/// Throws EvalTimeout when `options.deadline` passes mid-evaluation.
SolutionTable evaluate(const QueryAST& query, const GraphStore& store,
                       const EvalOptions& options = {});

/// ORDER BY term comparator, exposed for reuse and tests. Treats
/// `nullopt` as unbound (sorting before every bound term).
bool order_by_less(const std::optional<Term>& a, const std::optional<Term>& b);

/// Numeric value of a term under the ORDER BY sniffing rule: a literal
/// whose datatype is numeric or whose lexical form is an optionally
/// signed decimal.
std::optional<double> numeric_value(const Term& t);

/// SPARQL-results-JSON: {"head":{"vars":[...]},"results":{"bindings":[...]}};
/// unbound variables are omitted from their binding object.
std::string to_results_json(const SolutionTable& table);

/// Aligned text table: header row plus one line per solution, an em dash
/// for unbound cells.
std::string to_text_table(const SolutionTable& table);

}  // namespace rkg
