#include "rkg/inference.hpp"

#include <sstream>

#include <json.hpp>

namespace rkg {

namespace {

const char* kSubclassTransitivity = "subclass-transitivity";
const char* kTypeInheritance = "type-inheritance";
const char* kSubpropertyInheritance = "subproperty-inheritance";
const char* kDomainTyping = "domain-typing";
const char* kRangeTyping = "range-typing";
const char* kInverseMaterialization = "inverse-materialization";

}  // namespace

InferenceStats materialize(GraphStore& store, const SchemaIndex& schema,
                           std::vector<std::pair<Triple, std::string>>* inferred_log) {
    InferenceStats stats;
    for (const char* rule : {kSubclassTransitivity, kTypeInheritance, kSubpropertyInheritance,
                             kDomainTyping, kRangeTyping, kInverseMaterialization}) {
        stats.rule_firings[rule] = 0;
    }

    const Term rdf_type{Iri(std::string(vocab::kRdfType))};
    const Term sub_class_of{Iri(std::string(vocab::kRdfsSubClassOf))};

    auto emit = [&](const Triple& t, const char* rule) -> bool {
        if (!store.add(t)) return false;
        ++stats.rule_firings[rule];
        ++stats.inferred_triples;
        if (inferred_log) inferred_log->emplace_back(t, rule);
        return true;
    };

    bool changed = true;
    while (changed) {
        changed = false;
        ++stats.rounds;

        // subclass transitivity over the store's own subClassOf edges
        {
            auto edges = store.match(std::nullopt, sub_class_of, std::nullopt);
            for (const Triple& cd : edges) {
                if (!is_iri(cd.object)) continue;
                for (const Triple& de : store.match(cd.object, sub_class_of, std::nullopt)) {
                    if (!is_iri(de.object)) continue;
                    if (cd.subject == de.object) continue;  // skip trivial self-edges
                    changed |= emit(Triple{cd.subject, sub_class_of, de.object},
                                    kSubclassTransitivity);
                }
            }
        }

        // type inheritance through the schema's subclass closure
        for (const Triple& t : store.match(std::nullopt, rdf_type, std::nullopt)) {
            if (!is_iri(t.object)) continue;
            for (const Iri& super : schema.superclass_closure(as_iri(t.object))) {
                changed |= emit(Triple{t.subject, rdf_type, Term{super}}, kTypeInheritance);
            }
        }

        // property-driven rules share one pass over the declared properties
        for (const auto& [piri, decl] : schema.properties()) {
            const Term pred{piri};
            auto uses = store.match(std::nullopt, pred, std::nullopt);
            if (uses.empty()) continue;

            const auto& superprops = schema.superproperty_closure(piri);
            for (const Triple& t : uses) {
                for (const Iri& q : superprops) {
                    changed |= emit(Triple{t.subject, Term{q}, t.object},
                                    kSubpropertyInheritance);
                }
                for (const Iri& domain : decl.domains) {
                    changed |= emit(Triple{t.subject, rdf_type, Term{domain}}, kDomainTyping);
                }
                if (decl.kind == PropertyKind::Object && !is_literal(t.object)) {
                    for (const Iri& range : decl.ranges) {
                        changed |= emit(Triple{t.object, rdf_type, Term{range}}, kRangeTyping);
                    }
                }
                if (decl.inverse_of && !is_literal(t.object)) {
                    changed |= emit(Triple{t.object, Term{*decl.inverse_of}, t.subject},
                                    kInverseMaterialization);
                }
            }
        }
    }
    return stats;
}

ConsistencyReport check_consistency(const GraphStore& store, const SchemaIndex& schema) {
    ConsistencyReport report;
    const Term rdf_type{Iri(std::string(vocab::kRdfType))};

    std::set<std::string> seen;
    for (const Triple& t : store.match(std::nullopt, rdf_type, std::nullopt)) {
        if (!seen.insert(to_ntriples(t.subject)).second) continue;
        std::vector<Iri> types;
        for (const Triple& tt : store.match(t.subject, rdf_type, std::nullopt)) {
            if (is_iri(tt.object) && schema.is_class(as_iri(tt.object)))
                types.push_back(as_iri(tt.object));
        }
        for (std::size_t i = 0; i < types.size(); ++i) {
            for (std::size_t j = i + 1; j < types.size(); ++j) {
                if (!schema.disjoint(types[i], types[j])) continue;
                Clash clash;
                clash.kind = "disjoint-classes";
                clash.individual = t.subject;
                clash.details = {types[i].value, types[j].value};
                clash.witnesses = {Triple{t.subject, rdf_type, Term{types[i]}},
                                   Triple{t.subject, rdf_type, Term{types[j]}}};
                report.clashes.push_back(std::move(clash));
            }
        }
    }

    for (const Triple& t : store.triples()) {
        const PropertyDecl* prop = schema.find_property(as_iri(t.predicate));
        if (!prop) continue;
        if (prop->kind == PropertyKind::Object && is_literal(t.object)) {
            Clash clash;
            clash.kind = "literal-object";
            clash.individual = t.subject;
            clash.details = {prop->iri.value};
            clash.witnesses = {t};
            report.clashes.push_back(std::move(clash));
        } else if (prop->kind == PropertyKind::Data && !is_literal(t.object)) {
            Clash clash;
            clash.kind = "iri-data-value";
            clash.individual = t.subject;
            clash.details = {prop->iri.value};
            clash.witnesses = {t};
            report.clashes.push_back(std::move(clash));
        }
    }

    report.consistent = report.clashes.empty();
    return report;
}

std::set<Iri> types_of(const GraphStore& store, const Iri& individual) {
    std::set<Iri> out;
    for (const Triple& t :
         store.match(Term{individual}, Term{Iri(std::string(vocab::kRdfType))}, std::nullopt)) {
        if (is_iri(t.object)) out.insert(as_iri(t.object));
    }
    return out;
}

std::string stats_text(const InferenceStats& stats) {
    std::ostringstream out;
    out << "rounds: " << stats.rounds << "\n";
    out << "inferred triples: " << stats.inferred_triples << "\n";
    for (const auto& [rule, count] : stats.rule_firings) {
        out << "  " << rule << ": " << count << "\n";
    }
    return out.str();
}

std::string stats_json(const InferenceStats& stats) {
    nlohmann::ordered_json j;
    j["rounds"] = stats.rounds;
    j["inferredTriples"] = stats.inferred_triples;
    j["ruleFirings"] = nlohmann::ordered_json::object();
    for (const auto& [rule, count] : stats.rule_firings) j["ruleFirings"][rule] = count;
    return j.dump();
}

std::string consistency_text(const ConsistencyReport& report) {
    std::ostringstream out;
    out << (report.consistent ? "consistent" : "inconsistent") << "\n";
    for (const Clash& c : report.clashes) {
        out << "  " << c.kind << "  " << to_ntriples(c.individual);
        for (const std::string& d : c.details) out << "  " << d;
        out << "\n";
        for (const Triple& w : c.witnesses) out << "    " << to_ntriples(w) << "\n";
    }
    return out.str();
}

std::string consistency_json(const ConsistencyReport& report) {
    nlohmann::ordered_json j;
    j["consistent"] = report.consistent;
    j["clashes"] = nlohmann::ordered_json::array();
    for (const Clash& c : report.clashes) {
        nlohmann::ordered_json e;
        e["kind"] = c.kind;
        e["individual"] = to_ntriples(c.individual);
        e["details"] = c.details;
        e["witnesses"] = nlohmann::ordered_json::array();
        for (const Triple& w : c.witnesses) e["witnesses"].push_back(to_ntriples(w));
        j["clashes"].push_back(e);
    }
    return j.dump();
}

}  // namespace rkg
