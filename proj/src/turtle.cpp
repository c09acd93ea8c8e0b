#include "rkg/turtle.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "rkg/errors.hpp"

namespace rkg {

namespace {

bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

bool is_pn_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
           static_cast<unsigned char>(c) >= 0x80;
}

void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xc0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3f));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xe0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3f));
        out += static_cast<char>(0x80 | (cp & 0x3f));
    } else {
        out += static_cast<char>(0xf0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3f));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3f));
        out += static_cast<char>(0x80 | (cp & 0x3f));
    }
}

class Cursor {
public:
    Cursor(std::string_view text, std::size_t line_base = 1) : text_(text), line_(line_base) {}

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
    bool consume(char c) {
        if (peek() == c) {
            take();
            return true;
        }
        return false;
    }
    bool consume_word(std::string_view word, bool fold_case = false) {
        if (pos_ + word.size() > text_.size()) return false;
        for (std::size_t i = 0; i < word.size(); ++i) {
            char a = text_[pos_ + i];
            char b = word[i];
            if (fold_case) {
                a = static_cast<char>(std::tolower(static_cast<unsigned char>(a)));
                b = static_cast<char>(std::tolower(static_cast<unsigned char>(b)));
            }
            if (a != b) return false;
        }
        for (std::size_t i = 0; i < word.size(); ++i) take();
        return true;
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
        std::string excerpt(text_.substr(pos_, end - pos_));
        if (excerpt.empty() && !eof()) excerpt = std::string(1, text_[pos_]);
        throw ParseError(line_, col_, msg, excerpt);
    }

    std::size_t line() const { return line_; }
    std::size_t col() const { return col_; }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_;
    std::size_t col_ = 1;
};

class TurtleParser {
public:
    explicit TurtleParser(std::string_view text) : cur_(text) {}

    ParsedDoc run() {
        while (true) {
            cur_.skip_space();
            if (cur_.eof()) break;
            if (cur_.peek() == '@') {
                directive();
            } else if (looks_like_sparql_prefix()) {
                sparql_prefix();
            } else {
                statement();
            }
        }
        return std::move(doc_);
    }

private:
    bool looks_like_sparql_prefix() {
        // "PREFIX" keyword, case-insensitive, followed by whitespace.
        static constexpr std::string_view kw = "PREFIX";
        for (std::size_t i = 0; i < kw.size(); ++i) {
            char c = static_cast<char>(std::toupper(static_cast<unsigned char>(cur_.peek(i))));
            if (c != kw[i]) return false;
        }
        return is_ws(cur_.peek(kw.size()));
    }

    void directive() {
        if (cur_.consume_word("@prefix")) {
            prefix_binding();
            cur_.skip_space();
            if (!cur_.consume('.')) cur_.fail("expected '.' after @prefix directive");
        } else if (cur_.consume_word("@base")) {
            cur_.fail("@base directives are not supported");
        } else {
            cur_.fail("unknown directive");
        }
    }

    void sparql_prefix() {
        cur_.consume_word("PREFIX", /*fold_case=*/true);
        prefix_binding();
        // SPARQL-style prefix line takes no trailing dot.
    }

    void prefix_binding() {
        cur_.skip_space();
        std::string label = pname_prefix();
        if (!cur_.consume(':')) cur_.fail("expected ':' in prefix declaration");
        cur_.skip_space();
        Iri ns = iriref();
        doc_.prefixes.declare(label, ns.value);
    }

    std::string pname_prefix() {
        std::string label;
        while (is_pn_char(cur_.peek()) || (cur_.peek() == '.' && is_pn_char(cur_.peek(1)))) {
            label += cur_.take();
        }
        return label;
    }

    Iri iriref() {
        if (!cur_.consume('<')) cur_.fail("expected '<' to open an IRI");
        std::string value;
        while (true) {
            if (cur_.eof()) cur_.fail("unterminated IRI");
            char c = cur_.take();
            if (c == '>') break;
            if (c == '\\') {
                value += unescape(true);
            } else if (is_ws(c) || c == '<') {
                cur_.fail("whitespace or '<' inside IRI");
            } else {
                value += c;
            }
        }
        if (value.find(':') == std::string::npos)
            cur_.fail("relative IRIs are not supported: <" + value + ">");
        return Iri(value);
    }

    std::string unescape(bool iri_context) {
        // Called after the backslash has been consumed... here the
        // backslash is the char we must read next.
        char c = cur_.take();
        switch (c) {
            case 't': return "\t";
            case 'b': return "\b";
            case 'n': return "\n";
            case 'r': return "\r";
            case 'f': return "\f";
            case '"': return "\"";
            case '\'': return "'";
            case '\\': return "\\";
            case 'u': return unicode_escape(4);
            case 'U': return unicode_escape(8);
            default:
                if (iri_context) cur_.fail("invalid escape in IRI");
                cur_.fail(std::string("invalid escape '\\") + c + "'");
        }
    }

    std::string unicode_escape(int digits) {
        std::uint32_t cp = 0;
        for (int i = 0; i < digits; ++i) {
            char c = cur_.take();
            cp <<= 4;
            if (c >= '0' && c <= '9') {
                cp |= static_cast<std::uint32_t>(c - '0');
            } else if (c >= 'a' && c <= 'f') {
                cp |= static_cast<std::uint32_t>(c - 'a' + 10);
            } else if (c >= 'A' && c <= 'F') {
                cp |= static_cast<std::uint32_t>(c - 'A' + 10);
            } else {
                cur_.fail("invalid hex digit in unicode escape");
            }
        }
        std::string out;
        append_utf8(out, cp);
        return out;
    }

    Iri pname_or_iriref() {
        if (cur_.peek() == '<') return iriref();
        std::string prefix = pname_prefix();
        if (!cur_.consume(':')) cur_.fail("expected CURIE or IRI");
        std::string local = pn_local();
        try {
            return doc_.prefixes.resolve(prefix, local);
        } catch (const ResolveError& e) {
            cur_.fail("unknown prefix '" + prefix + ":'");
        }
    }

    std::string pn_local() {
        std::string local;
        while (true) {
            char c = cur_.peek();
            if (is_pn_char(c)) {
                local += cur_.take();
            } else if (c == '.' && (is_pn_char(cur_.peek(1)) || cur_.peek(1) == '.')) {
                // dots are allowed inside a local name, never at its end
                local += cur_.take();
            } else {
                break;
            }
        }
        return local;
    }

    Term blank_node() {
        cur_.take();  // '_'
        if (!cur_.consume(':')) cur_.fail("expected ':' after '_' in blank node");
        std::string label;
        while (is_pn_char(cur_.peek()) || cur_.peek() == '.') label += cur_.take();
        while (!label.empty() && label.back() == '.') label.pop_back();
        if (label.empty()) cur_.fail("empty blank-node label");
        return BlankNode{label};
    }

    Term literal() {
        char quote = cur_.peek();
        std::string lex = string_body(quote);
        if (cur_.peek() == '@') {
            cur_.take();
            std::string tag;
            while (std::isalnum(static_cast<unsigned char>(cur_.peek())) || cur_.peek() == '-')
                tag += cur_.take();
            if (tag.empty()) cur_.fail("empty language tag");
            return Literal::tagged(std::move(lex), std::move(tag));
        }
        if (cur_.peek() == '^') {
            cur_.take();
            if (!cur_.consume('^')) cur_.fail("expected '^^' before datatype");
            Iri dt = pname_or_iriref();
            if (dt.value == vocab::kXsdString) return Literal::plain(std::move(lex));
            return Literal::typed(std::move(lex), dt.value);
        }
        return Literal::plain(std::move(lex));
    }

    std::string string_body(char quote) {
        cur_.take();  // opening quote
        bool long_form = false;
        if (cur_.peek() == quote && cur_.peek(1) == quote) {
            cur_.take();
            cur_.take();
            long_form = true;
        } else if (cur_.peek() == quote) {
            cur_.take();  // empty short string
            return "";
        }
        std::string out;
        while (true) {
            if (cur_.eof()) cur_.fail("unterminated string literal");
            char c = cur_.peek();
            if (c == quote) {
                if (!long_form) {
                    cur_.take();
                    return out;
                }
                if (cur_.peek(1) == quote && cur_.peek(2) == quote) {
                    cur_.take();
                    cur_.take();
                    cur_.take();
                    return out;
                }
                out += cur_.take();
            } else if (c == '\\') {
                cur_.take();
                out += unescape(false);
            } else if (!long_form && c == '\n') {
                cur_.fail("newline in single-line string literal");
            } else {
                out += cur_.take();
            }
        }
    }

    Term number_or_boolean() {
        if (cur_.consume_word("true")) return Literal::typed("true", std::string(vocab::kXsdBoolean));
        if (cur_.consume_word("false"))
            return Literal::typed("false", std::string(vocab::kXsdBoolean));
        std::string lex;
        if (cur_.peek() == '+' || cur_.peek() == '-') lex += cur_.take();
        bool saw_digit = false, saw_dot = false, saw_exp = false;
        while (true) {
            char c = cur_.peek();
            if (std::isdigit(static_cast<unsigned char>(c))) {
                saw_digit = true;
                lex += cur_.take();
            } else if (c == '.' && !saw_dot && !saw_exp &&
                       std::isdigit(static_cast<unsigned char>(cur_.peek(1)))) {
                saw_dot = true;
                lex += cur_.take();
            } else if ((c == 'e' || c == 'E') && saw_digit && !saw_exp) {
                saw_exp = true;
                lex += cur_.take();
                if (cur_.peek() == '+' || cur_.peek() == '-') lex += cur_.take();
            } else {
                break;
            }
        }
        if (!saw_digit) cur_.fail("expected a number");
        std::string_view dt = saw_exp   ? vocab::kXsdDouble
                              : saw_dot ? vocab::kXsdDecimal
                                        : vocab::kXsdInteger;
        return Literal::typed(std::move(lex), std::string(dt));
    }

    Term subject() {
        char c = cur_.peek();
        if (c == '<') return iriref();
        if (c == '_') return blank_node();
        if (is_pn_char(c) || c == ':') return pname_or_iriref();
        cur_.fail("expected subject (IRI, CURIE, or blank node)");
    }

    Iri verb() {
        if (cur_.peek() == 'a' && !is_pn_char(cur_.peek(1)) && cur_.peek(1) != ':' &&
            cur_.peek(1) != '.') {
            cur_.take();
            return Iri(std::string(vocab::kRdfType));
        }
        return pname_or_iriref();
    }

    Term object() {
        char c = cur_.peek();
        if (c == '<') return iriref();
        if (c == '_') return blank_node();
        if (c == '"' || c == '\'') return literal();
        if (c == '+' || c == '-' || std::isdigit(static_cast<unsigned char>(c)))
            return number_or_boolean();
        if (cur_.peek() == 't' || cur_.peek() == 'f') {
            // could be a boolean or a CURIE like tag:x; try boolean first
            if (boolean_ahead()) return number_or_boolean();
        }
        if (is_pn_char(c) || c == ':') return pname_or_iriref();
        cur_.fail("expected object (IRI, CURIE, literal, or blank node)");
    }

    bool boolean_ahead() {
        auto word_then_delim = [&](std::string_view w) {
            for (std::size_t i = 0; i < w.size(); ++i)
                if (cur_.peek(i) != w[i]) return false;
            char after = cur_.peek(w.size());
            return !is_pn_char(after) && after != ':';
        };
        return word_then_delim("true") || word_then_delim("false");
    }

    void statement() {
        Term subj = subject();
        while (true) {
            cur_.skip_space();
            Iri pred = verb();
            while (true) {
                cur_.skip_space();
                Term obj = object();
                doc_.triples.push_back(Triple{subj, pred, obj});
                cur_.skip_space();
                if (!cur_.consume(',')) break;
            }
            if (cur_.consume(';')) {
                cur_.skip_space();
                while (cur_.consume(';')) cur_.skip_space();
                if (cur_.peek() == '.') break;  // dangling ';' before terminator
                continue;
            }
            break;
        }
        cur_.skip_space();
        if (!cur_.consume('.')) cur_.fail("expected '.' at end of statement");
    }

    Cursor cur_;
    ParsedDoc doc_;
};

std::string render_term_turtle(const Term& t, const PrefixMap& pm) {
    if (is_iri(t)) {
        std::string c = pm.shorten(as_iri(t).value);
        if (!c.empty()) return c;
        return "<" + as_iri(t).value + ">";
    }
    if (is_blank(t)) return "_:" + as_blank(t).label;
    const Literal& l = as_literal(t);
    std::string out = "\"" + escape_literal(l.lexical) + "\"";
    if (!l.lang.empty()) return out + "@" + l.lang;
    if (l.datatype == vocab::kXsdString) return out;
    std::string dt = pm.shorten(l.datatype);
    if (!dt.empty()) return out + "^^" + dt;
    return out + "^^<" + l.datatype + ">";
}

std::string render_verb(const Iri& pred, const PrefixMap& pm) {
    if (pred.value == vocab::kRdfType) return "a";
    return render_term_turtle(Term{pred}, pm);
}

}  // namespace

ParsedDoc parse_turtle(std::string_view text) { return TurtleParser(text).run(); }

void load_turtle(GraphStore& store, std::string_view text) {
    ParsedDoc doc = parse_turtle(text);
    store.prefixes().merge(doc.prefixes);
    for (const Triple& t : doc.triples) store.add(t);
}

std::string serialize_turtle(const GraphStore& store) {
    std::ostringstream out;
    const PrefixMap& pm = store.prefixes();
    for (const auto& [label, ns] : pm.entries()) {
        out << "@prefix " << label << ": <" << ns << "> .\n";
    }

    // canonical-form sort keys make the output independent of insertion order
    std::map<std::string, std::pair<Term, std::map<std::string, std::pair<Iri, std::map<std::string, Term>>>>>
        by_subject;
    for (const Triple& t : store.triples()) {
        auto& subj_slot = by_subject[to_ntriples(t.subject)];
        subj_slot.first = t.subject;
        auto& pred_slot = subj_slot.second[to_ntriples(t.predicate)];
        pred_slot.first = as_iri(t.predicate);
        pred_slot.second.emplace(to_ntriples(t.object), t.object);
    }

    if (!by_subject.empty() && pm.size() > 0) out << "\n";

    for (const auto& [subj_key, subj_entry] : by_subject) {
        out << render_term_turtle(subj_entry.first, pm);
        bool first_pred = true;
        for (const auto& [pred_key, pred_entry] : subj_entry.second) {
            if (first_pred) {
                out << " ";
                first_pred = false;
            } else {
                out << " ;\n    ";
            }
            out << render_verb(pred_entry.first, pm);
            bool first_obj = true;
            for (const auto& [obj_key, obj] : pred_entry.second) {
                out << (first_obj ? " " : ", ") << render_term_turtle(obj, pm);
                first_obj = false;
            }
        }
        out << " .\n";
    }
    return out.str();
}

namespace {

class NTriplesLineParser {
public:
    NTriplesLineParser(std::string_view line, std::size_t line_no) : cur_(line, line_no) {}

    // Term-only entry point used by parse_ntriples_term.
    Term term() {
        cur_.skip_space();
        Term t = parse_term();
        cur_.skip_space();
        if (!cur_.eof()) cur_.fail("trailing characters after term");
        return t;
    }

    std::optional<Triple> triple() {
        cur_.skip_space();
        if (cur_.eof()) return std::nullopt;
        Term s = parse_term();
        cur_.skip_space();
        Term p = parse_term();
        cur_.skip_space();
        Term o = parse_term();
        cur_.skip_space();
        if (!cur_.consume('.')) cur_.fail("expected '.' at end of triple");
        cur_.skip_space();
        if (!cur_.eof()) cur_.fail("trailing characters after '.'");
        Triple t{std::move(s), std::move(p), std::move(o)};
        if (!structurally_valid(t)) cur_.fail("structurally invalid triple");
        return t;
    }

private:
    Term parse_term() {
        char c = cur_.peek();
        if (c == '<') return iriref();
        if (c == '_') return blank();
        if (c == '"') return literal();
        cur_.fail("expected IRI, blank node, or literal");
    }

    Term iriref() {
        cur_.take();
        std::string v;
        while (true) {
            if (cur_.eof()) cur_.fail("unterminated IRI");
            char c = cur_.take();
            if (c == '>') break;
            if (is_ws(c)) cur_.fail("whitespace inside IRI");
            if (c == '\\') {
                char e = cur_.take();
                std::uint32_t cp = 0;
                int n = e == 'u' ? 4 : e == 'U' ? 8 : 0;
                if (n == 0) cur_.fail("invalid escape in IRI");
                for (int i = 0; i < n; ++i) {
                    char h = cur_.take();
                    cp <<= 4;
                    if (h >= '0' && h <= '9') cp |= static_cast<std::uint32_t>(h - '0');
                    else if (h >= 'a' && h <= 'f') cp |= static_cast<std::uint32_t>(h - 'a' + 10);
                    else if (h >= 'A' && h <= 'F') cp |= static_cast<std::uint32_t>(h - 'A' + 10);
                    else cur_.fail("invalid hex digit");
                }
                append_utf8(v, cp);
                continue;
            }
            v += c;
        }
        return Iri(v);
    }

    Term blank() {
        cur_.take();
        if (!cur_.consume(':')) cur_.fail("expected ':' after '_'");
        std::string label;
        while (is_pn_char(cur_.peek()) || cur_.peek() == '.') label += cur_.take();
        while (!label.empty() && label.back() == '.') label.pop_back();
        if (label.empty()) cur_.fail("empty blank-node label");
        return BlankNode{label};
    }

    Term literal() {
        cur_.take();
        std::string lex;
        while (true) {
            if (cur_.eof()) cur_.fail("unterminated literal");
            char c = cur_.take();
            if (c == '"') break;
            if (c == '\\') {
                char e = cur_.take();
                switch (e) {
                    case 't': lex += '\t'; break;
                    case 'b': lex += '\b'; break;
                    case 'n': lex += '\n'; break;
                    case 'r': lex += '\r'; break;
                    case 'f': lex += '\f'; break;
                    case '"': lex += '"'; break;
                    case '\'': lex += '\''; break;
                    case '\\': lex += '\\'; break;
                    case 'u':
                    case 'U': {
                        int n = e == 'u' ? 4 : 8;
                        std::uint32_t cp = 0;
                        for (int i = 0; i < n; ++i) {
                            char h = cur_.take();
                            cp <<= 4;
                            if (h >= '0' && h <= '9') cp |= static_cast<std::uint32_t>(h - '0');
                            else if (h >= 'a' && h <= 'f')
                                cp |= static_cast<std::uint32_t>(h - 'a' + 10);
                            else if (h >= 'A' && h <= 'F')
                                cp |= static_cast<std::uint32_t>(h - 'A' + 10);
                            else cur_.fail("invalid hex digit");
                        }
                        append_utf8(lex, cp);
                        break;
                    }
                    default: cur_.fail("invalid escape in literal");
                }
                continue;
            }
            lex += c;
        }
        if (cur_.peek() == '@') {
            cur_.take();
            std::string tag;
            while (std::isalnum(static_cast<unsigned char>(cur_.peek())) || cur_.peek() == '-')
                tag += cur_.take();
            if (tag.empty()) cur_.fail("empty language tag");
            return Literal::tagged(std::move(lex), std::move(tag));
        }
        if (cur_.peek() == '^') {
            cur_.take();
            if (!cur_.consume('^')) cur_.fail("expected '^^'");
            Term dt = iriref();
            if (as_iri(dt).value == vocab::kXsdString) return Literal::plain(std::move(lex));
            return Literal::typed(std::move(lex), as_iri(dt).value);
        }
        return Literal::plain(std::move(lex));
    }

    Cursor cur_;
};

}  // namespace

std::vector<Triple> parse_ntriples(std::string_view text) {
    std::vector<Triple> out;
    std::size_t line_no = 1;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        std::string_view line =
            end == std::string_view::npos ? text.substr(start) : text.substr(start, end - start);
        // '#' only starts a comment outside of IRIs/literals
        if (line.find('#') != std::string_view::npos) {
            std::size_t i = 0;
            bool in_iri = false, in_literal = false, escaped = false;
            for (; i < line.size(); ++i) {
                char c = line[i];
                if (in_literal) {
                    if (escaped) escaped = false;
                    else if (c == '\\') escaped = true;
                    else if (c == '"') in_literal = false;
                    continue;
                }
                if (c == '"') in_literal = true;
                else if (c == '<') in_iri = true;
                else if (c == '>') in_iri = false;
                else if (c == '#' && !in_iri) break;
            }
            if (i < line.size()) line = line.substr(0, i);
        }
        auto t = NTriplesLineParser(line, line_no).triple();
        if (t) out.push_back(std::move(*t));
        if (end == std::string_view::npos) break;
        start = end + 1;
        ++line_no;
    }
    return out;
}

void load_ntriples(GraphStore& store, std::string_view text) {
    for (const Triple& t : parse_ntriples(text)) store.add(t);
}

std::string serialize_ntriples(const GraphStore& store) {
    std::vector<std::string> lines;
    lines.reserve(store.size());
    for (const Triple& t : store.triples()) lines.push_back(to_ntriples(t));
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const std::string& l : lines) {
        out += l;
        out += "\n";
    }
    return out;
}

Term parse_ntriples_term(std::string_view text) { return NTriplesLineParser(text, 1).term(); }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write file: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failed: " + path);
}

void load_turtle_file(GraphStore& store, const std::string& path) {
    try {
        load_turtle(store, read_file(path));
    } catch (const ParseError& e) {
        throw ParseError(e.line(), e.col(), path + ": " + e.message(), e.excerpt());
    }
}

void load_ntriples_file(GraphStore& store, const std::string& path) {
    try {
        load_ntriples(store, read_file(path));
    } catch (const ParseError& e) {
        throw ParseError(e.line(), e.col(), path + ": " + e.message(), e.excerpt());
    }
}

}  // namespace rkg
