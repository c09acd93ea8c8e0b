#include "rkg/schema.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include <json.hpp>

#include "rkg/errors.hpp"

namespace rkg {

namespace {

const std::set<Iri> kEmptySet{};

Iri iri(std::string_view v) { return Iri(std::string(v)); }

bool in_builtin_namespace(const std::string& value) {
    return value.rfind(std::string(vocab::kRdfNs), 0) == 0 ||
           value.rfind(std::string(vocab::kRdfsNs), 0) == 0 ||
           value.rfind(std::string(vocab::kOwlNs), 0) == 0;
}

/// Transitive reachability over an edge map, excluding the start node.
std::set<Iri> reach(const Iri& start, const std::map<Iri, std::set<Iri>>& edges) {
    std::set<Iri> seen;
    std::deque<Iri> work;
    auto it = edges.find(start);
    if (it != edges.end())
        for (const Iri& n : it->second) work.push_back(n);
    while (!work.empty()) {
        Iri cur = work.front();
        work.pop_front();
        if (!seen.insert(cur).second) continue;
        auto eit = edges.find(cur);
        if (eit != edges.end())
            for (const Iri& n : eit->second) work.push_back(n);
    }
    return seen;
}

void detect_class_cycles(const std::map<Iri, std::set<Iri>>& edges) {
    // 0 = white, 1 = on stack, 2 = done
    std::map<Iri, int> color;
    std::vector<Iri> stack;

    struct Frame {
        Iri node;
        std::vector<Iri> next;
        std::size_t i = 0;
    };

    for (const auto& [root, _] : edges) {
        if (color[root] != 0) continue;
        std::vector<Frame> frames;
        auto push = [&](const Iri& n) {
            Frame f;
            f.node = n;
            auto it = edges.find(n);
            if (it != edges.end()) f.next.assign(it->second.begin(), it->second.end());
            frames.push_back(std::move(f));
            color[n] = 1;
            stack.push_back(n);
        };
        push(root);
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.i < f.next.size()) {
                Iri n = f.next[f.i++];
                if (color[n] == 1) {
                    // collect the cycle from the stack for the error message
                    std::string members;
                    auto pos = std::find(stack.begin(), stack.end(), n);
                    for (auto it = pos; it != stack.end(); ++it) {
                        if (!members.empty()) members += " -> ";
                        members += it->value;
                    }
                    members += " -> " + n.value;
                    throw SchemaError("subclass cycle: " + members);
                }
                if (color[n] == 0) push(n);
            } else {
                color[f.node] = 2;
                stack.pop_back();
                frames.pop_back();
            }
        }
    }
}

}  // namespace

std::string property_kind_name(PropertyKind kind) {
    switch (kind) {
        case PropertyKind::Object: return "object";
        case PropertyKind::Data: return "data";
        case PropertyKind::Annotation: return "annotation";
    }
    return "?";
}

const ClassDecl* SchemaIndex::find_class(const Iri& iri) const {
    auto it = classes_.find(iri);
    return it == classes_.end() ? nullptr : &it->second;
}

const PropertyDecl* SchemaIndex::find_property(const Iri& iri) const {
    auto it = properties_.find(iri);
    return it == properties_.end() ? nullptr : &it->second;
}

const std::set<Iri>& SchemaIndex::superclass_closure(const Iri& c) const {
    auto it = class_closure_.find(c);
    return it == class_closure_.end() ? kEmptySet : it->second;
}

const std::set<Iri>& SchemaIndex::superproperty_closure(const Iri& p) const {
    auto it = property_closure_.find(p);
    return it == property_closure_.end() ? kEmptySet : it->second;
}

bool SchemaIndex::subclass_of(const Iri& c, const Iri& d) const {
    if (c == d) return true;
    return superclass_closure(c).count(d) != 0;
}

bool SchemaIndex::disjoint(const Iri& c, const Iri& d) const {
    auto ancestors_incl = [&](const Iri& x) {
        std::set<Iri> s = superclass_closure(x);
        s.insert(x);
        return s;
    };
    std::set<Iri> cs = ancestors_incl(c);
    std::set<Iri> ds = ancestors_incl(d);
    for (const Iri& a : cs) {
        const ClassDecl* decl = find_class(a);
        if (!decl) continue;
        for (const Iri& b : decl->disjoint_with) {
            if (ds.count(b)) return true;
        }
    }
    return false;
}

SchemaIndex extract_schema(const GraphStore& store) {
    SchemaIndex index;

    const Term type_pred = iri(vocab::kRdfType);
    auto ensure_class = [&](const Iri& c) -> ClassDecl& {
        auto [it, inserted] = index.classes_.try_emplace(c);
        if (inserted) it->second.iri = c;
        return it->second;
    };
    auto ensure_property = [&](const Iri& p) -> PropertyDecl& {
        auto [it, inserted] = index.properties_.try_emplace(p);
        if (inserted) it->second.iri = p;
        return it->second;
    };

    // explicit class declarations
    for (std::string_view cls : {vocab::kOwlClass, vocab::kRdfsClass}) {
        for (const Triple& t : store.match(std::nullopt, type_pred, Term{iri(cls)})) {
            if (is_iri(t.subject)) ensure_class(as_iri(t.subject));
        }
    }

    // property kind declarations; a second, different kind is an error
    struct KindDecl {
        std::string_view type_iri;
        PropertyKind kind;
    };
    for (KindDecl kd : {KindDecl{vocab::kOwlObjectProperty, PropertyKind::Object},
                        KindDecl{vocab::kOwlDatatypeProperty, PropertyKind::Data},
                        KindDecl{vocab::kOwlAnnotationProperty, PropertyKind::Annotation}}) {
        for (const Triple& t : store.match(std::nullopt, type_pred, Term{iri(kd.type_iri)})) {
            if (!is_iri(t.subject)) continue;
            const Iri& p = as_iri(t.subject);
            auto existing = index.properties_.find(p);
            if (existing != index.properties_.end() && existing->second.kind != kd.kind) {
                throw SchemaError("property " + p.value + " re-declared as " +
                                  property_kind_name(kd.kind) + ", was " +
                                  property_kind_name(existing->second.kind));
            }
            ensure_property(p).kind = kd.kind;
        }
    }

    for (const Triple& t : store.match(std::nullopt, Term{iri(vocab::kRdfsSubClassOf)}, std::nullopt)) {
        if (!is_iri(t.subject) || !is_iri(t.object)) continue;
        ensure_class(as_iri(t.subject)).superclasses.insert(as_iri(t.object));
        ensure_class(as_iri(t.object));
    }

    for (const Triple& t : store.match(std::nullopt, Term{iri(vocab::kOwlDisjointWith)}, std::nullopt)) {
        if (!is_iri(t.subject) || !is_iri(t.object)) continue;
        ensure_class(as_iri(t.subject)).disjoint_with.insert(as_iri(t.object));
        ensure_class(as_iri(t.object)).disjoint_with.insert(as_iri(t.subject));
    }

    for (const Triple& t : store.match(std::nullopt, Term{iri(vocab::kRdfsDomain)}, std::nullopt)) {
        if (!is_iri(t.subject) || !is_iri(t.object)) continue;
        ensure_property(as_iri(t.subject)).domains.insert(as_iri(t.object));
        ensure_class(as_iri(t.object));
    }

    for (const Triple& t : store.match(std::nullopt, Term{iri(vocab::kRdfsRange)}, std::nullopt)) {
        if (!is_iri(t.subject) || !is_iri(t.object)) continue;
        PropertyDecl& p = ensure_property(as_iri(t.subject));
        p.ranges.insert(as_iri(t.object));
        // ranges of object properties are classes; datatype ranges are not
        if (p.kind == PropertyKind::Object) ensure_class(as_iri(t.object));
    }

    for (const Triple& t :
         store.match(std::nullopt, Term{iri(vocab::kRdfsSubPropertyOf)}, std::nullopt)) {
        if (!is_iri(t.subject) || !is_iri(t.object)) continue;
        ensure_property(as_iri(t.subject)).superproperties.insert(as_iri(t.object));
        ensure_property(as_iri(t.object));
    }

    for (const Triple& t : store.match(std::nullopt, Term{iri(vocab::kOwlInverseOf)}, std::nullopt)) {
        if (!is_iri(t.subject) || !is_iri(t.object)) continue;
        PropertyDecl& p = ensure_property(as_iri(t.subject));
        PropertyDecl& q = ensure_property(as_iri(t.object));
        if (p.kind != PropertyKind::Object || q.kind != PropertyKind::Object)
            throw SchemaError("owl:inverseOf requires object properties: " + p.iri.value +
                              " / " + q.iri.value);
        p.inverse_of = q.iri;
        q.inverse_of = p.iri;
    }

    for (const Triple& t :
         store.match(std::nullopt, Term{iri(kFacetAnnotation)}, std::nullopt)) {
        if (!is_iri(t.subject) || !is_literal(t.object)) continue;
        auto it = index.classes_.find(as_iri(t.subject));
        if (it != index.classes_.end()) it->second.facet = as_literal(t.object).lexical;
    }

    std::map<Iri, std::set<Iri>> class_edges;
    for (const auto& [c, decl] : index.classes_) class_edges[c] = decl.superclasses;
    detect_class_cycles(class_edges);
    for (const auto& [c, _] : index.classes_) index.class_closure_[c] = reach(c, class_edges);

    std::map<Iri, std::set<Iri>> prop_edges;
    for (const auto& [p, decl] : index.properties_) prop_edges[p] = decl.superproperties;
    for (const auto& [p, _] : index.properties_) index.property_closure_[p] = reach(p, prop_edges);

    return index;
}

Metrics compute_metrics(const SchemaIndex& schema, const GraphStore& data) {
    Metrics m;
    m.class_count = schema.classes().size();
    for (const auto& [_, decl] : schema.properties()) {
        switch (decl.kind) {
            case PropertyKind::Object: ++m.object_property_count; break;
            case PropertyKind::Data: ++m.data_property_count; break;
            case PropertyKind::Annotation: ++m.annotation_property_count; break;
        }
    }
    std::set<Iri> individuals;
    for (const Triple& t :
         data.match(std::nullopt, Term{Iri(std::string(vocab::kRdfType))}, std::nullopt)) {
        if (!is_iri(t.subject) || !is_iri(t.object)) continue;
        const Iri& subject = as_iri(t.subject);
        if (!schema.is_class(as_iri(t.object))) continue;
        if (schema.is_class(subject) || schema.find_property(subject)) continue;
        individuals.insert(subject);
    }
    m.individual_count = individuals.size();
    m.triple_count = data.size();
    return m;
}

std::string metrics_table(const Metrics& m) {
    const std::vector<std::pair<std::string, std::size_t>> rows = {
        {"Class count", m.class_count},
        {"Object property count", m.object_property_count},
        {"Data property count", m.data_property_count},
        {"Annotation property count", m.annotation_property_count},
        {"Individual count", m.individual_count},
        {"Triple count", m.triple_count},
    };
    std::size_t width = 0;
    for (const auto& [label, _] : rows) width = std::max(width, label.size());
    std::ostringstream out;
    for (const auto& [label, value] : rows) {
        out << label << std::string(width - label.size(), ' ') << "  " << value << "\n";
    }
    return out.str();
}

std::string metrics_json(const Metrics& m) {
    nlohmann::ordered_json j;
    j["classCount"] = m.class_count;
    j["objectPropertyCount"] = m.object_property_count;
    j["dataPropertyCount"] = m.data_property_count;
    j["annotationPropertyCount"] = m.annotation_property_count;
    j["individualCount"] = m.individual_count;
    j["tripleCount"] = m.triple_count;
    return j.dump();
}

std::string violation_kind_name(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::UndeclaredProperty: return "undeclared-property";
        case ViolationKind::DomainMismatch: return "domain-mismatch";
        case ViolationKind::RangeMismatch: return "range-mismatch";
        case ViolationKind::DatatypeMismatch: return "datatype-mismatch";
        case ViolationKind::DisjointnessClash: return "disjointness-clash";
    }
    return "?";
}

std::size_t ViolationReport::error_count() const {
    return static_cast<std::size_t>(std::count_if(
        violations.begin(), violations.end(),
        [](const Violation& v) { return v.severity == Severity::Error; }));
}

std::size_t ViolationReport::warning_count() const {
    return violations.size() - error_count();
}

ViolationReport validate(const GraphStore& data, const SchemaIndex& schema) {
    ViolationReport report;
    const Iri rdf_type{std::string(vocab::kRdfType)};

    auto types_of_term = [&](const Term& t) {
        std::set<Iri> types;
        for (const Triple& tt : data.match(t, Term{rdf_type}, std::nullopt)) {
            if (is_iri(tt.object)) types.insert(as_iri(tt.object));
        }
        return types;
    };

    // disjointness over each typed subject, one entry per clashing pair
    std::set<std::string> seen_subjects;
    for (const Triple& t : data.match(std::nullopt, Term{rdf_type}, std::nullopt)) {
        std::string key = to_ntriples(t.subject);
        if (!seen_subjects.insert(key).second) continue;
        std::vector<Iri> types;
        for (const Iri& c : types_of_term(t.subject))
            if (schema.is_class(c)) types.push_back(c);
        for (std::size_t i = 0; i < types.size(); ++i) {
            for (std::size_t j = i + 1; j < types.size(); ++j) {
                if (!schema.disjoint(types[i], types[j])) continue;
                report.violations.push_back(Violation{
                    Severity::Error, ViolationKind::DisjointnessClash,
                    Triple{t.subject, Term{rdf_type}, Term{types[i]}},
                    key + " is a member of disjoint classes " + types[i].value + " and " +
                        types[j].value});
            }
        }
    }

    for (const Triple& t : data.triples()) {
        const Iri& pred = as_iri(t.predicate);
        if (pred.value == vocab::kRdfType) continue;

        const PropertyDecl* prop = schema.find_property(pred);
        if (!prop) {
            if (in_builtin_namespace(pred.value) || pred.value == kFacetAnnotation) continue;
            report.violations.push_back(Violation{Severity::Warning,
                                                  ViolationKind::UndeclaredProperty, t,
                                                  "property " + pred.value + " is not declared"});
            continue;
        }
        if (prop->kind == PropertyKind::Annotation) continue;

        // domain: subject types incompatible with a declared domain
        if (!prop->domains.empty() && !is_literal(t.subject)) {
            std::set<Iri> stypes = types_of_term(t.subject);
            for (const Iri& domain : prop->domains) {
                for (const Iri& st : stypes) {
                    if (!schema.is_class(st)) continue;
                    if (schema.disjoint(st, domain)) {
                        report.violations.push_back(Violation{
                            Severity::Error, ViolationKind::DomainMismatch, t,
                            "subject type " + st.value + " is disjoint with declared domain " +
                                domain.value + " of " + pred.value});
                    }
                }
            }
        }

        if (prop->kind == PropertyKind::Object) {
            if (is_literal(t.object)) {
                report.violations.push_back(
                    Violation{Severity::Error, ViolationKind::RangeMismatch, t,
                              "object property " + pred.value + " has a literal object"});
                continue;
            }
            if (!prop->ranges.empty()) {
                std::set<Iri> otypes = types_of_term(t.object);
                for (const Iri& range : prop->ranges) {
                    for (const Iri& ot : otypes) {
                        if (!schema.is_class(ot)) continue;
                        if (schema.disjoint(ot, range)) {
                            report.violations.push_back(Violation{
                                Severity::Error, ViolationKind::RangeMismatch, t,
                                "object type " + ot.value + " is disjoint with declared range " +
                                    range.value + " of " + pred.value});
                        }
                    }
                }
            }
        } else {  // data property
            if (!is_literal(t.object)) {
                report.violations.push_back(
                    Violation{Severity::Error, ViolationKind::RangeMismatch, t,
                              "data property " + pred.value + " has a non-literal object"});
                continue;
            }
            if (!prop->ranges.empty()) {
                const Literal& lit = as_literal(t.object);
                bool ok = false;
                for (const Iri& range : prop->ranges)
                    if (range.value == lit.datatype) ok = true;
                if (!ok) {
                    report.violations.push_back(Violation{
                        Severity::Error, ViolationKind::DatatypeMismatch, t,
                        "literal datatype " + lit.datatype + " does not match declared range of " +
                            pred.value});
                }
            }
        }
    }
    return report;
}

std::string report_text(const ViolationReport& report) {
    std::ostringstream out;
    for (const Violation& v : report.violations) {
        out << (v.severity == Severity::Error ? "error" : "warning") << "  "
            << violation_kind_name(v.kind) << "  " << to_ntriples(v.subject_triple) << "  "
            << v.explanation << "\n";
    }
    out << report.error_count() << " error(s), " << report.warning_count() << " warning(s)\n";
    return out.str();
}

std::string report_json(const ViolationReport& report) {
    nlohmann::ordered_json j;
    j["violations"] = nlohmann::ordered_json::array();
    for (const Violation& v : report.violations) {
        nlohmann::ordered_json e;
        e["severity"] = v.severity == Severity::Error ? "error" : "warning";
        e["kind"] = violation_kind_name(v.kind);
        e["triple"] = to_ntriples(v.subject_triple);
        e["explanation"] = v.explanation;
        j["violations"].push_back(e);
    }
    j["errors"] = report.error_count();
    j["warnings"] = report.warning_count();
    return j.dump();
}

}  // namespace rkg
