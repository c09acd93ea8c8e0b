#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace rkg {

namespace vocab {
inline constexpr std::string_view kRdfNs = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kRdfsNs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view kOwlNs = "http://www.w3.org/2002/07/owl#";
inline constexpr std::string_view kXsdNs = "http://www.w3.org/2001/XMLSchema#";

inline constexpr std::string_view kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr std::string_view kRdfLangString = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";
inline constexpr std::string_view kRdfsSubClassOf = "http://www.w3.org/2000/01/rdf-schema#subClassOf";
inline constexpr std::string_view kRdfsSubPropertyOf = "http://www.w3.org/2000/01/rdf-schema#subPropertyOf";
inline constexpr std::string_view kRdfsDomain = "http://www.w3.org/2000/01/rdf-schema#domain";
inline constexpr std::string_view kRdfsRange = "http://www.w3.org/2000/01/rdf-schema#range";
inline constexpr std::string_view kRdfsClass = "http://www.w3.org/2000/01/rdf-schema#Class";
inline constexpr std::string_view kRdfsLabel = "http://www.w3.org/2000/01/rdf-schema#label";
inline constexpr std::string_view kOwlClass = "http://www.w3.org/2002/07/owl#Class";
inline constexpr std::string_view kOwlObjectProperty = "http://www.w3.org/2002/07/owl#ObjectProperty";
inline constexpr std::string_view kOwlDatatypeProperty = "http://www.w3.org/2002/07/owl#DatatypeProperty";
inline constexpr std::string_view kOwlAnnotationProperty = "http://www.w3.org/2002/07/owl#AnnotationProperty";
inline constexpr std::string_view kOwlInverseOf = "http://www.w3.org/2002/07/owl#inverseOf";
inline constexpr std::string_view kOwlDisjointWith = "http://www.w3.org/2002/07/owl#disjointWith";
inline constexpr std::string_view kXsdString = "http://www.w3.org/2001/XMLSchema#string";
inline constexpr std::string_view kXsdInteger = "http://www.w3.org/2001/XMLSchema#integer";
inline constexpr std::string_view kXsdDecimal = "http://www.w3.org/2001/XMLSchema#decimal";
inline constexpr std::string_view kXsdDouble = "http://www.w3.org/2001/XMLSchema#double";
inline constexpr std::string_view kXsdBoolean = "http://www.w3.org/2001/XMLSchema#boolean";
}  // namespace vocab

/// An absolute IRI. Must be non-empty, free of whitespace and of '>',
/// so it can always be written between angle brackets.
struct Iri {
    std::string value;

    Iri() = default;
    explicit Iri(std::string v);

    auto operator<=>(const Iri&) const = default;
};

/// An RDF literal. The datatype is always set (plain literals are
/// normalized to xsd:string); a language tag forces rdf:langString.
struct Literal {
    std::string lexical;
    std::string datatype{vocab::kXsdString};
    std::string lang;  // lowercase BCP-47; empty unless datatype is rdf:langString

    static Literal plain(std::string lexical);
    static Literal typed(std::string lexical, std::string datatype_iri);
    static Literal tagged(std::string lexical, std::string lang_tag);

    auto operator<=>(const Literal&) const = default;
};

struct BlankNode {
    std::string label;

    auto operator<=>(const BlankNode&) const = default;
};

using Term = std::variant<Iri, Literal, BlankNode>;

inline bool is_iri(const Term& t) { return std::holds_alternative<Iri>(t); }
inline bool is_literal(const Term& t) { return std::holds_alternative<Literal>(t); }
inline bool is_blank(const Term& t) { return std::holds_alternative<BlankNode>(t); }

inline const Iri& as_iri(const Term& t) { return std::get<Iri>(t); }
inline const Literal& as_literal(const Term& t) { return std::get<Literal>(t); }
inline const BlankNode& as_blank(const Term& t) { return std::get<BlankNode>(t); }

struct Triple {
    Term subject;
    Term predicate;
    Term object;

    auto operator<=>(const Triple&) const = default;
};

/// Subject must be an IRI or blank node, predicate an IRI.
bool structurally_valid(const Triple& t);

/// Canonical N-Triples form of one term. Literal datatypes are always
/// explicit except for language-tagged strings; this string doubles as
/// the equality/hashing medium across the code base.
std::string to_ntriples(const Term& t);

/// Canonical statement line "<s> <p> <o> ." (no trailing newline).
std::string to_ntriples(const Triple& t);

/// Backslash-escapes a literal's lexical form for N-Triples/Turtle output.
std::string escape_literal(std::string_view lexical);

}  // namespace rkg
