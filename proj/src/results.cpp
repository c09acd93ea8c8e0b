#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "rkg/query.hpp"

namespace rkg {

namespace {

std::size_t display_width(const std::string& s) {
    std::size_t n = 0;
    for (unsigned char c : s) {
        if ((c & 0xc0) != 0x80) ++n;  // count codepoints, not bytes
    }
    return n;
}

std::string render_cell(const std::optional<Term>& cell) {
    if (!cell) return "—";
    if (is_iri(*cell)) return "<" + as_iri(*cell).value + ">";
    if (is_blank(*cell)) return "_:" + as_blank(*cell).label;
    return as_literal(*cell).lexical;
}

}  // namespace

std::string to_results_json(const SolutionTable& table) {
    nlohmann::ordered_json j;
    j["head"]["vars"] = table.header;
    j["results"]["bindings"] = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json binding = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < table.header.size(); ++i) {
            if (!row[i]) continue;  // unbound variables are omitted
            const Term& t = *row[i];
            nlohmann::ordered_json cell;
            if (is_iri(t)) {
                cell["type"] = "uri";
                cell["value"] = as_iri(t).value;
            } else if (is_blank(t)) {
                cell["type"] = "bnode";
                cell["value"] = as_blank(t).label;
            } else {
                const Literal& l = as_literal(t);
                cell["type"] = "literal";
                cell["value"] = l.lexical;
                if (!l.lang.empty()) {
                    cell["xml:lang"] = l.lang;
                } else if (l.datatype != vocab::kXsdString) {
                    cell["datatype"] = l.datatype;
                }
            }
            binding[table.header[i]] = cell;
        }
        j["results"]["bindings"].push_back(binding);
    }
    return j.dump();
}

std::string to_text_table(const SolutionTable& table) {
    std::vector<std::size_t> widths;
    widths.reserve(table.header.size());
    for (const std::string& h : table.header) widths.push_back(display_width(h));

    std::vector<std::vector<std::string>> cells;
    cells.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        std::vector<std::string> line;
        line.reserve(row.size());
        for (std::size_t i = 0; i < row.size(); ++i) {
            line.push_back(render_cell(row[i]));
            widths[i] = std::max(widths[i], display_width(line.back()));
        }
        cells.push_back(std::move(line));
    }

    auto emit_row = [&](std::ostringstream& out, const std::vector<std::string>& row) {
        std::string line;
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) line += "  ";
            line += row[i];
            if (i + 1 < row.size())
                line += std::string(widths[i] - display_width(row[i]), ' ');
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out << line << "\n";
    };

    std::ostringstream out;
    emit_row(out, table.header);
    for (const auto& row : cells) emit_row(out, row);
    return out.str();
}

}  // namespace rkg
