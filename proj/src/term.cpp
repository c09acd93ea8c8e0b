#include "rkg/term.hpp"

#include <cctype>

namespace rkg {

Iri::Iri(std::string v) : value(std::move(v)) {
    if (value.empty()) throw std::invalid_argument("IRI must be non-empty");
    for (char c : value) {
        if (c == '>' || c == ' ' || c == '\t' || c == '\n' || c == '\r')
            throw std::invalid_argument("IRI contains whitespace or '>': " + value);
    }
}

Literal Literal::plain(std::string lexical) {
    Literal l;
    l.lexical = std::move(lexical);
    l.datatype = std::string(vocab::kXsdString);
    return l;
}

Literal Literal::typed(std::string lexical, std::string datatype_iri) {
    Literal l;
    l.lexical = std::move(lexical);
    l.datatype = datatype_iri.empty() ? std::string(vocab::kXsdString) : std::move(datatype_iri);
    return l;
}

Literal Literal::tagged(std::string lexical, std::string lang_tag) {
    Literal l;
    l.lexical = std::move(lexical);
    l.datatype = std::string(vocab::kRdfLangString);
    for (char& c : lang_tag) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    l.lang = std::move(lang_tag);
    return l;
}

bool structurally_valid(const Triple& t) {
    if (is_literal(t.subject)) return false;
    if (!is_iri(t.predicate)) return false;
    return true;
}

std::string escape_literal(std::string_view lexical) {
    std::string out;
    out.reserve(lexical.size() + 8);
    for (char c : lexical) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '"': out += "\\\""; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out;
}

std::string to_ntriples(const Term& t) {
    if (is_iri(t)) return "<" + as_iri(t).value + ">";
    if (is_blank(t)) return "_:" + as_blank(t).label;
    const Literal& l = as_literal(t);
    std::string out = "\"" + escape_literal(l.lexical) + "\"";
    if (!l.lang.empty()) {
        out += "@" + l.lang;
    } else {
        out += "^^<" + l.datatype + ">";
    }
    return out;
}

std::string to_ntriples(const Triple& t) {
    return to_ntriples(t.subject) + " " + to_ntriples(t.predicate) + " " + to_ntriples(t.object) +
           " .";
}

}  // namespace rkg
