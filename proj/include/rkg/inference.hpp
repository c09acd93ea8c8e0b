#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rkg/graph_store.hpp"
#include "rkg/schema.hpp"

namespace rkg {

struct InferenceStats {
    std::size_t rounds = 0;
    std::size_t inferred_triples = 0;
    std::map<std::string, std::size_t> rule_firings;  // rule name -> triples added
};

/// Forward-chaining materialization to fixpoint. Rules:
///   subclass-transitivity   C ⊑ D, D ⊑ E       => C ⊑ E
///   type-inheritance        x a C, C ⊑ D       => x a D
///   subproperty-inheritance x p y, p ⊑ q       => x q y
///   domain-typing           x p y, domain(p)=C => x a C
///   range-typing            x p y, range(p)=C  => y a C  (object properties)
///   inverse-materialization x p y, q = p⁻      => y q x
/// Requires exclusive store access. Re-running adds zero triples.
/// When `inferred_log` is given, every added triple is appended with the
/// name of the rule that produced it.
InferenceStats materialize(GraphStore& store, const SchemaIndex& schema,
                           std::vector<std::pair<Triple, std::string>>* inferred_log = nullptr);

struct Clash {
    std::string kind;  // disjoint-classes | literal-object | iri-data-value
    Term individual;
    std::vector<std::string> details;
    std::vector<Triple> witnesses;
};

struct ConsistencyReport {
    bool consistent = true;
    std::vector<Clash> clashes;
};

/// Detects membership in two disjoint classes, literals in object-property
/// position, and IRIs in data-property position. Authoritative after
/// materialization; best effort before it.
ConsistencyReport check_consistency(const GraphStore& store, const SchemaIndex& schema);

/// All classes the individual belongs to, direct and inferred (assumes the
/// store is materialized). Empty set when untyped.
std::set<Iri> types_of(const GraphStore& store, const Iri& individual);

std::string stats_text(const InferenceStats& stats);
std::string stats_json(const InferenceStats& stats);
std::string consistency_text(const ConsistencyReport& report);
std::string consistency_json(const ConsistencyReport& report);

}  // namespace rkg
