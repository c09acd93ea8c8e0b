#include "rkg/sheetmap.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include <json.hpp>

#include "rkg/errors.hpp"

namespace rkg {

namespace {

const std::string kEmptyCell;

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

bool is_column_token(const std::string& tok) {
    auto colon = tok.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 >= tok.size()) return false;
    auto all_upper = [](std::string_view v) {
        return std::all_of(v.begin(), v.end(), [](char c) { return c >= 'A' && c <= 'Z'; });
    };
    return all_upper(tok.substr(0, colon)) && all_upper(tok.substr(colon + 1));
}

}  // namespace

void Workbook::add_sheet(const std::string& name, Grid grid) { sheets_[name] = std::move(grid); }

const Workbook::Grid* Workbook::find(const std::string& name) const {
    auto it = sheets_.find(name);
    return it == sheets_.end() ? nullptr : &it->second;
}

const std::string& Workbook::cell(const std::string& sheet, long row, int column) const {
    const Grid* g = find(sheet);
    if (!g || row < 1 || static_cast<std::size_t>(row) > g->size()) return kEmptyCell;
    const auto& r = (*g)[static_cast<std::size_t>(row - 1)];
    if (column < 1 || static_cast<std::size_t>(column) > r.size()) return kEmptyCell;
    return r[static_cast<std::size_t>(column - 1)];
}

long Workbook::row_count(const std::string& sheet) const {
    const Grid* g = find(sheet);
    return g ? static_cast<long>(g->size()) : 0;
}

int Workbook::column_count(const std::string& sheet, long row) const {
    const Grid* g = find(sheet);
    if (!g || row < 1 || static_cast<std::size_t>(row) > g->size()) return 0;
    return static_cast<int>((*g)[static_cast<std::size_t>(row - 1)].size());
}

Workbook::Grid parse_csv(std::string_view text) {
    Workbook::Grid grid;
    std::vector<std::string> row;
    std::string cell;
    bool in_quotes = false;
    std::size_t line = 1;
    std::size_t quote_open_line = 0;

    auto end_cell = [&]() {
        row.push_back(trim(cell));
        cell.clear();
    };
    auto end_row = [&]() {
        end_cell();
        grid.push_back(std::move(row));
        row.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                cell += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                in_quotes = true;
                quote_open_line = line;
                break;
            case ',': end_cell(); break;
            case '\r': break;
            case '\n':
                ++line;
                end_row();
                break;
            default: cell += c;
        }
    }
    if (in_quotes) throw ParseError(quote_open_line, 1, "unbalanced quote in CSV");
    if (!cell.empty() || !row.empty()) end_row();
    return grid;
}

Workbook load_workbook(const std::map<std::string, std::string>& csv_by_sheet) {
    Workbook wb;
    for (const auto& [name, csv] : csv_by_sheet) wb.add_sheet(name, parse_csv(csv));
    return wb;
}

int column_number(const std::string& letters) {
    int n = 0;
    for (char c : letters) {
        if (c < 'A' || c > 'Z') throw std::invalid_argument("bad column letters: " + letters);
        n = n * 26 + (c - 'A' + 1);
    }
    if (n == 0) throw std::invalid_argument("empty column reference");
    return n;
}

std::string column_letters(int number) {
    std::string out;
    while (number > 0) {
        int rem = (number - 1) % 26;
        out.insert(out.begin(), static_cast<char>('A' + rem));
        number = (number - 1) / 26;
    }
    return out;
}

std::string iri_safe_local(const std::string& cell_text) {
    std::string trimmed = trim(cell_text);
    std::string out;
    bool in_ws = false;
    for (char c : trimmed) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            in_ws = true;
            continue;
        }
        if (in_ws) {
            out += '_';
            in_ws = false;
        }
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.') {
            out += c;
        }
    }
    return out;
}

namespace {

struct RuleToken {
    std::string text;
    std::size_t line;
    std::size_t col;
};

/// Splits rule body text into tokens: ',' stands alone, anything else is
/// a whitespace-delimited word (parens and quotes travel with the word).
std::vector<RuleToken> tokenize_body(const std::vector<std::pair<std::size_t, std::string>>& lines) {
    std::vector<RuleToken> toks;
    for (const auto& [line_no, line] : lines) {
        std::size_t i = 0;
        while (i < line.size()) {
            if (std::isspace(static_cast<unsigned char>(line[i]))) {
                ++i;
                continue;
            }
            if (line[i] == ',') {
                toks.push_back({",", line_no, i + 1});
                ++i;
                continue;
            }
            std::size_t start = i;
            while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
                   line[i] != ',')
                ++i;
            toks.push_back({line.substr(start, i - start), line_no, start + 1});
        }
    }
    return toks;
}

class RuleBodyParser {
public:
    RuleBodyParser(std::vector<RuleToken> toks, Rule& rule) : toks_(std::move(toks)), rule_(rule) {}

    void run() {
        expect_keyword("Individual:");
        rule_.individual = value_spec();
        while (!eof()) {
            const RuleToken& t = peek();
            if (t.text == "Types:") {
                take();
                parse_types();
            } else if (t.text == "Facts:") {
                take();
                parse_facts(rule_.facts);
            } else if (t.text == "Annotations:") {
                take();
                parse_facts(rule_.annotations);
            } else {
                fail(t, "unknown section keyword '" + t.text + "'");
            }
        }
    }

private:
    bool eof() const { return pos_ >= toks_.size(); }
    const RuleToken& peek() const { return toks_[pos_]; }
    const RuleToken& take() { return toks_[pos_++]; }

    [[noreturn]] void fail(const RuleToken& t, const std::string& msg) {
        throw ParseError(t.line, t.col, msg, t.text);
    }
    [[noreturn]] void fail_eof(const std::string& msg) {
        if (toks_.empty()) throw ParseError(1, 1, msg);
        const RuleToken& last = toks_.back();
        throw ParseError(last.line, last.col + last.text.size(), msg);
    }

    bool at_section() const {
        if (eof()) return true;
        const std::string& t = peek().text;
        return t == "Types:" || t == "Facts:" || t == "Annotations:";
    }

    void expect_keyword(const std::string& kw) {
        if (eof()) fail_eof("expected '" + kw + "'");
        const RuleToken& t = take();
        if (t.text != kw) fail(t, "expected '" + kw + "'");
    }

    ValueSpec value_spec() {
        if (eof()) fail_eof("expected a cell reference like @B*");
        const RuleToken& t = take();
        const std::string& w = t.text;
        if (w.size() < 3 || w[0] != '@') fail(t, "expected a cell reference like @B*");
        std::size_t i = 1;
        std::string column;
        while (i < w.size() && w[i] >= 'A' && w[i] <= 'Z') column += w[i++];
        if (column.empty()) fail(t, "cell reference has no column letters");
        if (i >= w.size() || w[i] != '*') fail(t, "cell reference must use '*' for the row");
        ++i;
        ValueSpec vs;
        vs.ref.column = column;
        if (i < w.size()) {
            if (w[i] != '(' || w.back() != ')') fail(t, "malformed qualifier");
            std::string q = w.substr(i + 1, w.size() - i - 2);
            if (q.rfind("xml:lang=", 0) == 0) {
                std::string tag = q.substr(9);
                if (tag.size() < 2 || tag.front() != '"' || tag.back() != '"')
                    fail(t, "language qualifier must be quoted");
                vs.qualifier = ValueSpec::Qualifier::Language;
                vs.qualifier_value = tag.substr(1, tag.size() - 2);
            } else if (!q.empty()) {
                vs.qualifier = ValueSpec::Qualifier::Datatype;
                vs.qualifier_value = q;
            } else {
                fail(t, "empty qualifier");
            }
        }
        return vs;
    }

    void parse_types() {
        while (true) {
            if (eof() || at_section()) {
                if (rule_.types.empty()) fail_eof("Types: section is empty");
                break;
            }
            const RuleToken& t = take();
            if (t.text == ",") fail(t, "expected a class reference");
            rule_.types.push_back(t.text);
            if (!eof() && peek().text == ",") {
                take();
                continue;
            }
            break;
        }
        if (!eof() && !at_section()) {
            // more refs without a separating comma are not part of this list
            fail(peek(), "unknown section keyword '" + peek().text + "'");
        }
    }

    void parse_facts(std::vector<FactClause>& out) {
        while (true) {
            if (eof() || at_section()) {
                if (out.empty()) fail_eof("fact list is empty");
                break;
            }
            const RuleToken& prop = take();
            if (prop.text == ",") fail(prop, "expected a property name");
            FactClause clause;
            clause.property = prop.text;
            clause.value = value_spec();
            out.push_back(std::move(clause));
            if (!eof() && peek().text == ",") {
                take();
                continue;
            }
            break;
        }
        if (!eof() && !at_section()) fail(peek(), "unknown section keyword '" + peek().text + "'");
    }

    std::vector<RuleToken> toks_;
    std::size_t pos_ = 0;
    Rule& rule_;
};

Rule parse_rule_header(const std::string& line, std::size_t line_no) {
    std::vector<std::pair<std::string, std::size_t>> words;  // word, 1-based col
    std::size_t i = 0;
    while (i < line.size()) {
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        words.emplace_back(line.substr(start, i - start), start + 1);
    }
    if (words.empty() || words[0].first != "RULE")
        throw ParseError(line_no, 1, "expected RULE header");

    // sheet name = words between RULE and the column-span token
    std::size_t span_idx = 0;
    for (std::size_t w = 1; w < words.size(); ++w) {
        if (is_column_token(words[w].first)) {
            span_idx = w;
            break;
        }
    }
    if (span_idx == 0)
        throw ParseError(line_no, 1, "header has no column span (like B:B)");
    if (span_idx == 1) throw ParseError(line_no, words[1].second, "header has no sheet name");

    Rule rule;
    for (std::size_t w = 1; w < span_idx; ++w) {
        if (!rule.sheet.empty()) rule.sheet += " ";
        rule.sheet += words[w].first;
    }
    const std::string& span = words[span_idx].first;
    auto colon = span.find(':');
    rule.start_column = span.substr(0, colon);
    rule.end_column = span.substr(colon + 1);
    if (column_number(rule.end_column) < column_number(rule.start_column))
        throw ParseError(line_no, words[span_idx].second, "end column before start column");

    std::size_t w = span_idx + 1;
    if (w >= words.size() || words[w].first != "rows")
        throw ParseError(line_no, 1, "expected 'rows' after the column span");
    ++w;
    if (w >= words.size()) throw ParseError(line_no, 1, "expected a row range");
    const std::string& range = words[w].first;
    auto dots = range.find("..");
    if (dots == std::string::npos)
        throw ParseError(line_no, words[w].second, "row range must look like 3..+ or 3..14",
                         range);
    try {
        rule.start_row = std::stol(range.substr(0, dots));
    } catch (const std::exception&) {
        throw ParseError(line_no, words[w].second, "bad start row", range);
    }
    std::string end = range.substr(dots + 2);
    if (end == "+") {
        rule.end_row = std::nullopt;
    } else {
        try {
            rule.end_row = std::stol(end);
        } catch (const std::exception&) {
            throw ParseError(line_no, words[w].second, "bad end row", range);
        }
    }
    if (rule.start_row < 1) throw ParseError(line_no, words[w].second, "start row must be >= 1");
    if (rule.end_row && *rule.end_row < rule.start_row)
        throw ParseError(line_no, words[w].second, "end row before start row");
    ++w;
    if (w < words.size()) {
        if (words[w].first == "disabled") {
            rule.enabled = false;
            ++w;
        }
        if (w < words.size())
            throw ParseError(line_no, words[w].second, "unexpected token after row range",
                             words[w].first);
    }
    return rule;
}

}  // namespace

RuleSet parse_rules(std::string_view text) {
    // split into lines, dropping '#' comment lines
    std::vector<std::pair<std::size_t, std::string>> lines;
    std::size_t line_no = 1;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        std::string line(end == std::string_view::npos ? text.substr(start)
                                                       : text.substr(start, end - start));
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.emplace_back(line_no, line);
        if (end == std::string_view::npos) break;
        start = end + 1;
        ++line_no;
    }

    RuleSet rs;
    std::size_t i = 0;
    while (i < lines.size()) {
        const std::string stripped = trim(lines[i].second);
        if (stripped.empty() || stripped[0] == '#') {
            ++i;
            continue;
        }
        Rule rule = parse_rule_header(lines[i].second, lines[i].first);
        ++i;
        std::vector<std::pair<std::size_t, std::string>> body;
        while (i < lines.size()) {
            std::string b = trim(lines[i].second);
            if (b.empty()) break;
            if (b[0] == '#') {
                ++i;
                continue;
            }
            if (b.rfind("RULE ", 0) == 0) break;
            if (b.rfind("Comment:", 0) == 0) {
                rule.comment = trim(b.substr(8));
                ++i;
                continue;
            }
            body.emplace_back(lines[i].first, lines[i].second);
            ++i;
        }
        if (body.empty())
            throw ParseError(lines[i - 1].first, 1, "rule body is missing its Individual: clause");
        RuleBodyParser(tokenize_body(body), rule).run();
        rs.rules.push_back(std::move(rule));
    }
    return rs;
}

namespace {

std::string resolve_ref(const std::string& ref, const PrefixMap& pm) {
    auto colon = ref.find(':');
    if (colon == std::string::npos) return pm.resolve("", ref).value;
    return pm.resolve(ref).value;
}

}  // namespace

std::size_t ProvenanceLog::triple_count() const {
    std::size_t n = 0;
    for (const ProvenanceEntry& e : entries) n += e.triples.size();
    return n;
}

std::string ProvenanceLog::to_jsonl() const {
    std::ostringstream out;
    for (const ProvenanceEntry& e : entries) {
        nlohmann::ordered_json j;
        j["rule"] = e.rule_index;
        j["sheet"] = e.sheet;
        j["row"] = e.row;
        j["triples"] = nlohmann::ordered_json::array();
        for (const Triple& t : e.triples) j["triples"].push_back(to_ntriples(t));
        j["skipped"] = nlohmann::ordered_json::array();
        for (const SkippedClause& s : e.skipped) {
            j["skipped"].push_back({{"clause", s.clause}, {"reason", s.reason}});
        }
        if (!e.warnings.empty()) j["warnings"] = e.warnings;
        if (e.duplicate_emissions > 0) j["duplicates"] = e.duplicate_emissions;
        out << j.dump() << "\n";
    }
    return out.str();
}

ApplyResult apply_rules(const RuleSet& rules, const Workbook& wb, const PrefixMap& pm,
                        const SchemaIndex& schema) {
    ApplyResult result;
    result.graph.prefixes().merge(pm);

    auto base = pm.find("");
    if (!base) throw ResolveError("");

    const Term rdf_type{Iri(std::string(vocab::kRdfType))};

    for (std::size_t ri = 0; ri < rules.rules.size(); ++ri) {
        const Rule& rule = rules.rules[ri];
        if (!rule.enabled) continue;
        if (!wb.has_sheet(rule.sheet)) throw SheetError("missing sheet: " + rule.sheet);

        int span_lo = column_number(rule.start_column);
        int span_hi = column_number(rule.end_column);

        long last_row;
        if (rule.end_row) {
            last_row = *rule.end_row;
        } else {
            // OPEN range: last row with any non-empty cell in the column span
            last_row = 0;
            for (long r = rule.start_row; r <= wb.row_count(rule.sheet); ++r) {
                for (int c = span_lo; c <= span_hi; ++c) {
                    if (!wb.cell(rule.sheet, r, c).empty()) {
                        last_row = r;
                        break;
                    }
                }
            }
        }

        int individual_col = column_number(rule.individual.ref.column);

        for (long row = rule.start_row; row <= last_row; ++row) {
            ProvenanceEntry entry;
            entry.rule_index = ri;
            entry.sheet = rule.sheet;
            entry.row = row;

            auto emit = [&](const Triple& t) {
                if (result.graph.add(t)) {
                    entry.triples.push_back(t);
                } else {
                    ++entry.duplicate_emissions;
                }
            };

            const std::string& ind_cell = wb.cell(rule.sheet, row, individual_col);
            if (ind_cell.empty()) {
                entry.skipped.push_back({"Individual", "empty individual cell"});
                result.log.entries.push_back(std::move(entry));
                continue;
            }
            std::string local = iri_safe_local(ind_cell);
            if (local.empty()) {
                entry.skipped.push_back({"Individual", "cell text yields an empty IRI name"});
                result.log.entries.push_back(std::move(entry));
                continue;
            }
            Term individual{Iri(*base + local)};

            for (const std::string& type_ref : rule.types) {
                emit(Triple{individual, rdf_type, Term{Iri(resolve_ref(type_ref, pm))}});
            }

            auto process_clause = [&](const FactClause& clause) {
                const std::string& cell =
                    wb.cell(rule.sheet, row, column_number(clause.value.ref.column));
                if (cell.empty()) {
                    entry.skipped.push_back({clause.property, "empty cell"});
                    return;
                }
                Iri prop{resolve_ref(clause.property, pm)};
                Term object;
                switch (clause.value.qualifier) {
                    case ValueSpec::Qualifier::Datatype: {
                        std::string dt = resolve_ref(clause.value.qualifier_value, pm);
                        object = dt == vocab::kXsdString ? Term{Literal::plain(cell)}
                                                         : Term{Literal::typed(cell, dt)};
                        break;
                    }
                    case ValueSpec::Qualifier::Language:
                        object = Term{Literal::tagged(cell, clause.value.qualifier_value)};
                        break;
                    case ValueSpec::Qualifier::None: {
                        const PropertyDecl* decl = schema.find_property(prop);
                        if (!decl) {
                            entry.warnings.push_back("property " + prop.value +
                                                     " is not declared; emitting a plain literal");
                            object = Term{Literal::plain(cell)};
                        } else if (decl->kind == PropertyKind::Object) {
                            std::string obj_local = iri_safe_local(cell);
                            if (obj_local.empty()) {
                                entry.skipped.push_back(
                                    {clause.property, "cell text yields an empty IRI name"});
                                return;
                            }
                            object = Term{Iri(*base + obj_local)};
                        } else {
                            object = Term{Literal::plain(cell)};
                        }
                        break;
                    }
                }
                emit(Triple{individual, Term{prop}, object});
            };

            for (const FactClause& clause : rule.facts) process_clause(clause);
            for (const FactClause& clause : rule.annotations) process_clause(clause);

            result.log.entries.push_back(std::move(entry));
        }
    }
    return result;
}

}  // namespace rkg
