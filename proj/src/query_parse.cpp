#include <cctype>

#include "rkg/errors.hpp"
#include "rkg/query.hpp"

namespace rkg {

namespace {

bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
           static_cast<unsigned char>(c) >= 0x80;
}

class QueryParser {
public:
    explicit QueryParser(std::string_view text) : text_(text) {}

    QueryAST run() {
        prologue();
        select_clause();
        skip_space();
        if (consume_keyword("WHERE")) skip_space();
        ast_.pattern = group();
        modifiers();
        skip_space();
        if (!eof()) fail("unexpected trailing input");
        return std::move(ast_);
    }

private:
    // --- low-level cursor ---
    bool eof() const { return pos_ >= text_.size(); }
    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
    }
    char take() {
        char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }
    void skip_space() {
        while (!eof()) {
            if (is_ws(peek())) {
                take();
            } else if (peek() == '#') {
                while (!eof() && peek() != '\n') take();
            } else {
                break;
            }
        }
    }
    [[noreturn]] void fail(const std::string& msg) const {
        std::size_t end = pos_;
        while (end < text_.size() && !is_ws(text_[end]) && end - pos_ < 24) ++end;
        throw ParseError(line_, col_, msg, std::string(text_.substr(pos_, end - pos_)));
    }

    /// Case-insensitive keyword match ending at a word boundary.
    bool keyword_ahead(std::string_view kw) const {
        if (pos_ + kw.size() > text_.size()) return false;
        for (std::size_t i = 0; i < kw.size(); ++i) {
            if (std::toupper(static_cast<unsigned char>(text_[pos_ + i])) != kw[i]) return false;
        }
        char after = pos_ + kw.size() < text_.size() ? text_[pos_ + kw.size()] : '\0';
        return !is_name_char(after) && after != ':';
    }
    bool consume_keyword(std::string_view kw) {
        if (!keyword_ahead(kw)) return false;
        for (std::size_t i = 0; i < kw.size(); ++i) take();
        return true;
    }

    // --- prologue / select ---
    void prologue() {
        while (true) {
            skip_space();
            if (!consume_keyword("PREFIX")) break;
            skip_space();
            std::string label;
            while (is_name_char(peek()) || peek() == '-' || peek() == '.') label += take();
            if (!label.empty() && label.back() == '.') fail("bad prefix label");
            skip_space();
            if (peek() == ':') take();
            else fail("expected ':' in PREFIX declaration");
            skip_space();
            ast_.prefixes.declare(label, iriref().value);
        }
    }

    void select_clause() {
        skip_space();
        if (!consume_keyword("SELECT")) fail("expected SELECT");
        skip_space();
        if (consume_keyword("DISTINCT")) {
            ast_.distinct = true;
            skip_space();
        }
        if (peek() == '*') {
            take();
            ast_.select_all = true;
            return;
        }
        while (true) {
            skip_space();
            if (peek() != '?' && peek() != '$') break;
            ast_.projection.push_back(variable());
        }
        if (ast_.projection.empty()) fail("SELECT needs '*' or at least one variable");
    }

    Variable variable() {
        take();  // ? or $
        std::string name;
        while (is_name_char(peek())) name += take();
        if (name.empty()) fail("empty variable name");
        return Variable{name};
    }

    Iri iriref() {
        if (peek() != '<') fail("expected '<' to open an IRI");
        take();
        std::string value;
        while (true) {
            if (eof()) fail("unterminated IRI");
            char c = take();
            if (c == '>') break;
            if (is_ws(c) || c == '<') fail("whitespace or '<' inside IRI");
            value += c;
        }
        if (value.find(':') == std::string::npos) fail("relative IRIs are not supported");
        return Iri(value);
    }

    Iri pname_or_iriref() {
        if (peek() == '<') return iriref();
        std::string prefix;
        while (is_name_char(peek()) || peek() == '-') prefix += take();
        if (peek() != ':') fail("expected CURIE or IRI");
        take();
        std::string local;
        while (is_name_char(peek()) || peek() == '-' ||
               (peek() == '.' && (is_name_char(peek(1)) || peek(1) == '.')))
            local += take();
        try {
            return ast_.prefixes.resolve(prefix, local);
        } catch (const ResolveError&) {
            fail("unknown prefix '" + prefix + ":'");
        }
    }

    Term literal() {
        char quote = take();  // " or '
        std::string lex;
        while (true) {
            if (eof()) fail("unterminated string literal");
            char c = take();
            if (c == quote) break;
            if (c == '\\') {
                char e = take();
                switch (e) {
                    case 't': lex += '\t'; break;
                    case 'n': lex += '\n'; break;
                    case 'r': lex += '\r'; break;
                    case '"': lex += '"'; break;
                    case '\'': lex += '\''; break;
                    case '\\': lex += '\\'; break;
                    default: fail("invalid escape in literal");
                }
                continue;
            }
            lex += c;
        }
        if (peek() == '@') {
            take();
            std::string tag;
            while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-') tag += take();
            if (tag.empty()) fail("empty language tag");
            return Term{Literal::tagged(lex, tag)};
        }
        if (peek() == '^' && peek(1) == '^') {
            take();
            take();
            Iri dt = pname_or_iriref();
            if (dt.value == vocab::kXsdString) return Term{Literal::plain(lex)};
            return Term{Literal::typed(lex, dt.value)};
        }
        return Term{Literal::plain(lex)};
    }

    Term numeric_literal() {
        std::string lex;
        if (peek() == '+' || peek() == '-') lex += take();
        bool saw_dot = false;
        while (std::isdigit(static_cast<unsigned char>(peek())) ||
               (peek() == '.' && !saw_dot && std::isdigit(static_cast<unsigned char>(peek(1))))) {
            if (peek() == '.') saw_dot = true;
            lex += take();
        }
        if (lex.empty() || lex == "+" || lex == "-") fail("expected a number");
        return Term{Literal::typed(
            lex, std::string(saw_dot ? vocab::kXsdDecimal : vocab::kXsdInteger))};
    }

    // --- patterns ---
    TermOrVar var_or_term(bool allow_literal) {
        skip_space();
        char c = peek();
        if (c == '?' || c == '$') return variable();
        if (c == '<') return Term{iriref()};
        if (c == '"' || c == '\'') {
            if (!allow_literal) fail("literal not allowed here");
            return literal();
        }
        if (c == '+' || c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
            if (!allow_literal) fail("literal not allowed here");
            return numeric_literal();
        }
        if (c == '_' && peek(1) == ':') {
            take();
            take();
            std::string label;
            while (is_name_char(peek())) label += take();
            if (label.empty()) fail("empty blank-node label");
            return Term{BlankNode{label}};
        }
        return Term{pname_or_iriref()};
    }

    TermOrVar verb() {
        skip_space();
        if (peek() == 'a' && !is_name_char(peek(1)) && peek(1) != ':') {
            take();
            return Term{Iri(std::string(vocab::kRdfType))};
        }
        if (peek() == '?' || peek() == '$') return variable();
        return Term{pname_or_iriref()};
    }

    void triples_block(GroupPattern& g) {
        TermOrVar subject = var_or_term(/*allow_literal=*/false);
        while (true) {
            TermOrVar pred = verb();
            while (true) {
                TermOrVar object = var_or_term(/*allow_literal=*/true);
                g.elements.push_back(TriplePattern{subject, pred, object});
                skip_space();
                if (peek() == ',') {
                    take();
                    continue;
                }
                break;
            }
            skip_space();
            if (peek() == ';') {
                take();
                skip_space();
                while (peek() == ';') {
                    take();
                    skip_space();
                }
                if (peek() == '.' || peek() == '}') break;
                continue;
            }
            break;
        }
        skip_space();
        if (peek() == '.') take();
    }

    GroupPattern group() {
        skip_space();
        if (peek() != '{') fail("expected '{'");
        take();
        GroupPattern g;
        while (true) {
            skip_space();
            if (eof()) fail("unterminated group pattern");
            if (peek() == '}') {
                take();
                break;
            }
            if (consume_keyword("OPTIONAL")) {
                auto sub = std::make_shared<GroupPattern>(group());
                g.elements.push_back(OptionalPattern{std::move(sub)});
                skip_space();
                if (peek() == '.') take();
                continue;
            }
            if (consume_keyword("FILTER")) {
                skip_space();
                if (peek() != '(') fail("expected '(' after FILTER");
                take();
                auto e = std::make_shared<Expression>(expression());
                skip_space();
                if (peek() != ')') fail("expected ')' to close FILTER");
                take();
                g.elements.push_back(FilterPattern{std::move(e)});
                skip_space();
                if (peek() == '.') take();
                continue;
            }
            if (peek() == '{') {
                // '{ A } UNION { B } UNION { C }' nests left; a lone braced
                // group splices into its parent.
                GroupPattern first = group();
                skip_space();
                if (keyword_ahead("UNION")) {
                    auto acc = std::make_shared<GroupPattern>(std::move(first));
                    while (consume_keyword("UNION")) {
                        auto rhs = std::make_shared<GroupPattern>(group());
                        GroupPattern joined;
                        joined.elements.push_back(UnionPattern{acc, rhs});
                        acc = std::make_shared<GroupPattern>(std::move(joined));
                        skip_space();
                    }
                    // unwrap the outermost single-element group
                    g.elements.push_back(std::move(acc->elements.front()));
                } else {
                    for (PatternElement& e : first.elements) g.elements.push_back(std::move(e));
                }
                skip_space();
                if (peek() == '.') take();
                continue;
            }
            triples_block(g);
        }
        return g;
    }

    // --- expressions ---
    Expression expression() { return or_expr(); }

    Expression or_expr() {
        Expression lhs = and_expr();
        while (true) {
            skip_space();
            if (peek() == '|' && peek(1) == '|') {
                take();
                take();
                Expression e;
                e.kind = Expression::Kind::Or;
                e.lhs = std::make_shared<Expression>(std::move(lhs));
                e.rhs = std::make_shared<Expression>(and_expr());
                lhs = std::move(e);
            } else {
                return lhs;
            }
        }
    }

    Expression and_expr() {
        Expression lhs = unary_expr();
        while (true) {
            skip_space();
            if (peek() == '&' && peek(1) == '&') {
                take();
                take();
                Expression e;
                e.kind = Expression::Kind::And;
                e.lhs = std::make_shared<Expression>(std::move(lhs));
                e.rhs = std::make_shared<Expression>(unary_expr());
                lhs = std::move(e);
            } else {
                return lhs;
            }
        }
    }

    Expression unary_expr() {
        skip_space();
        if (peek() == '!' && peek(1) != '=') {
            take();
            Expression e;
            e.kind = Expression::Kind::Not;
            e.lhs = std::make_shared<Expression>(unary_expr());
            return e;
        }
        Expression lhs = primary_expr();
        skip_space();
        std::string op;
        if (peek() == '=' ) {
            op = "=";
            take();
        } else if (peek() == '!' && peek(1) == '=') {
            op = "!=";
            take();
            take();
        } else if (peek() == '<') {
            take();
            op = consume_eq() ? "<=" : "<";
        } else if (peek() == '>') {
            take();
            op = consume_eq() ? ">=" : ">";
        } else {
            return lhs;
        }
        Expression e;
        e.kind = Expression::Kind::Compare;
        e.op = op;
        e.lhs = std::make_shared<Expression>(std::move(lhs));
        e.rhs = std::make_shared<Expression>(primary_expr());
        return e;
    }

    bool consume_eq() {
        if (peek() == '=') {
            take();
            return true;
        }
        return false;
    }

    Expression primary_expr() {
        skip_space();
        if (peek() == '(') {
            take();
            Expression e = expression();
            skip_space();
            if (peek() != ')') fail("expected ')'");
            take();
            return e;
        }
        if (consume_keyword("BOUND")) {
            skip_space();
            if (peek() != '(') fail("expected '(' after BOUND");
            take();
            skip_space();
            if (peek() != '?' && peek() != '$') fail("BOUND takes a variable");
            Expression e;
            e.kind = Expression::Kind::Bound;
            e.var = variable();
            skip_space();
            if (peek() != ')') fail("expected ')' after BOUND variable");
            take();
            return e;
        }
        Expression e;
        e.kind = Expression::Kind::Value;
        if (peek() == '?' || peek() == '$') {
            e.var = variable();
            return e;
        }
        if (peek() == '"' || peek() == '\'') {
            e.term = std::get<Term>(TermOrVar{literal()});
            return e;
        }
        if (peek() == '+' || peek() == '-' || std::isdigit(static_cast<unsigned char>(peek()))) {
            e.term = std::get<Term>(TermOrVar{numeric_literal()});
            return e;
        }
        if (peek() == '<') {
            e.term = Term{iriref()};
            return e;
        }
        if (consume_keyword("TRUE")) {
            e.term = Term{Literal::typed("true", std::string(vocab::kXsdBoolean))};
            return e;
        }
        if (consume_keyword("FALSE")) {
            e.term = Term{Literal::typed("false", std::string(vocab::kXsdBoolean))};
            return e;
        }
        fail("expected a variable, literal, IRI, or BOUND(...)");
    }

    // --- solution modifiers ---
    void modifiers() {
        skip_space();
        if (consume_keyword("ORDER")) {
            skip_space();
            if (!consume_keyword("BY")) fail("expected BY after ORDER");
            while (true) {
                skip_space();
                if (consume_keyword("ASC")) {
                    ast_.order_by.push_back(OrderKey{paren_variable(), true});
                } else if (consume_keyword("DESC")) {
                    ast_.order_by.push_back(OrderKey{paren_variable(), false});
                } else if (peek() == '(') {
                    take();
                    skip_space();
                    if (peek() != '?' && peek() != '$') fail("expected a variable in ORDER BY");
                    Variable v = variable();
                    skip_space();
                    if (peek() != ')') fail("expected ')'");
                    take();
                    ast_.order_by.push_back(OrderKey{std::move(v), true});
                } else if (peek() == '?' || peek() == '$') {
                    ast_.order_by.push_back(OrderKey{variable(), true});
                } else {
                    break;
                }
            }
            if (ast_.order_by.empty()) fail("ORDER BY needs at least one key");
        }
        skip_space();
        // LIMIT and OFFSET accepted in either order
        for (int i = 0; i < 2; ++i) {
            skip_space();
            if (consume_keyword("LIMIT")) {
                ast_.limit = integer();
            } else if (consume_keyword("OFFSET")) {
                ast_.offset = integer();
            }
        }
    }

    Variable paren_variable() {
        skip_space();
        if (peek() != '(') fail("expected '('");
        take();
        skip_space();
        if (peek() != '?' && peek() != '$') fail("expected a variable");
        Variable v = variable();
        skip_space();
        if (peek() != ')') fail("expected ')'");
        take();
        return v;
    }

    std::size_t integer() {
        skip_space();
        std::string digits;
        while (std::isdigit(static_cast<unsigned char>(peek()))) digits += take();
        if (digits.empty()) fail("expected a non-negative integer");
        return static_cast<std::size_t>(std::stoull(digits));
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
    QueryAST ast_;
};

}  // namespace

QueryAST parse_query(std::string_view text) { return QueryParser(text).run(); }

}  // namespace rkg
