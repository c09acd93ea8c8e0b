#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rkg/graph_store.hpp"
#include "rkg/term.hpp"

namespace rkg {

/// Annotation property used to tag a class with the facet it belongs to
/// (Personality, EnvironmentMilieu, Achievements, Shared). Facets are an
/// organizational view, not instance types.
inline constexpr std::string_view kFacetAnnotation = "https://w3id.org/ontobio#facet";

enum class PropertyKind { Object, Data, Annotation };

std::string property_kind_name(PropertyKind kind);

struct ClassDecl {
    Iri iri;
    std::set<Iri> superclasses;
    std::set<Iri> disjoint_with;
    std::optional<std::string> facet;
};

struct PropertyDecl {
    Iri iri;
    PropertyKind kind = PropertyKind::Object;
    std::set<Iri> domains;
    std::set<Iri> ranges;
    std::optional<Iri> inverse_of;
    std::set<Iri> superproperties;
};

/// Immutable view of the class/property declarations found in a store,
/// with precomputed subclass and subproperty transitive closures.
/// Freely shareable across threads once built.
class SchemaIndex {
public:
    const std::map<Iri, ClassDecl>& classes() const { return classes_; }
    const std::map<Iri, PropertyDecl>& properties() const { return properties_; }

    bool is_class(const Iri& iri) const { return classes_.count(iri) != 0; }
    const ClassDecl* find_class(const Iri& iri) const;
    const PropertyDecl* find_property(const Iri& iri) const;

    /// Strict ancestors of `c` (never contains `c` unless it sits on a
    /// cycle, which extraction rejects anyway).
    const std::set<Iri>& superclass_closure(const Iri& c) const;
    const std::set<Iri>& superproperty_closure(const Iri& p) const;

    /// Reflexive-transitive subclass test.
    bool subclass_of(const Iri& c, const Iri& d) const;

    /// True when some ancestor-or-self of `c` is declared disjoint with
    /// some ancestor-or-self of `d`.
    bool disjoint(const Iri& c, const Iri& d) const;

    friend SchemaIndex extract_schema(const GraphStore& store);

private:
    std::map<Iri, ClassDecl> classes_;
    std::map<Iri, PropertyDecl> properties_;
    std::map<Iri, std::set<Iri>> class_closure_;
    std::map<Iri, std::set<Iri>> property_closure_;
};

/// Builds the index from standard RDFS/OWL assertions (rdf:type owl:Class,
/// rdfs:subClassOf, rdfs:domain/range, owl:inverseOf, owl:disjointWith,
/// rdfs:subPropertyOf, the three owl property kinds). Properties that are
/// only mentioned in declarations default to object kind.
/// Throws SchemaError on a subclass cycle (naming its members) and on a
/// property re-declared with a different kind.
SchemaIndex extract_schema(const GraphStore& store);

struct Metrics {
    std::size_t class_count = 0;
    std::size_t object_property_count = 0;
    std::size_t data_property_count = 0;
    std::size_t annotation_property_count = 0;
    std::size_t individual_count = 0;
    std::size_t triple_count = 0;

    bool operator==(const Metrics&) const = default;
};

/// individual_count counts distinct IRIs typed by at least one declared
/// class that are not themselves declared classes or properties.
Metrics compute_metrics(const SchemaIndex& schema, const GraphStore& data);

/// Aligned two-column table, one row per metric.
std::string metrics_table(const Metrics& m);
std::string metrics_json(const Metrics& m);

enum class Severity { Warning, Error };

enum class ViolationKind {
    UndeclaredProperty,
    DomainMismatch,
    RangeMismatch,
    DatatypeMismatch,
    DisjointnessClash,
};

std::string violation_kind_name(ViolationKind kind);

struct Violation {
    Severity severity;
    ViolationKind kind;
    Triple subject_triple;
    std::string explanation;
};

struct ViolationReport {
    std::vector<Violation> violations;

    std::size_t error_count() const;
    std::size_t warning_count() const;
    bool has_errors() const { return error_count() > 0; }
};

/// Checks instance data against the schema. Authoritative after
/// materialization; runs on asserted data too (best effort). Problems are
/// report entries, never failures: undeclared properties warn, domain and
/// range incompatibilities, datatype conflicts, and disjointness clashes
/// are errors.
ViolationReport validate(const GraphStore& data, const SchemaIndex& schema);

std::string report_text(const ViolationReport& report);
std::string report_json(const ViolationReport& report);

}  // namespace rkg
