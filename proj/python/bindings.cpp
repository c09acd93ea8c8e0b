#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "rkg/commands.hpp"
#include "rkg/errors.hpp"
#include "rkg/inference.hpp"
#include "rkg/query.hpp"
#include "rkg/schema.hpp"
#include "rkg/sheetmap.hpp"
#include "rkg/turtle.hpp"

namespace py = pybind11;
using namespace rkg;

namespace {

std::optional<Term> opt_term(const std::optional<std::string>& text) {
    if (!text) return std::nullopt;
    return parse_ntriples_term(*text);
}

py::dict stats_dict(const InferenceStats& stats) {
    py::dict firings;
    for (const auto& [rule, n] : stats.rule_firings) firings[py::str(rule)] = n;
    py::dict out;
    out["rounds"] = stats.rounds;
    out["inferredTriples"] = stats.inferred_triples;
    out["ruleFirings"] = firings;
    return out;
}

py::dict metrics_dict(const Metrics& m) {
    py::dict out;
    out["classCount"] = m.class_count;
    out["objectPropertyCount"] = m.object_property_count;
    out["dataPropertyCount"] = m.data_property_count;
    out["annotationPropertyCount"] = m.annotation_property_count;
    out["individualCount"] = m.individual_count;
    out["tripleCount"] = m.triple_count;
    return out;
}

}  // namespace

PYBIND11_MODULE(_rkg, m) {
    m.doc() = "Faceted biographical knowledge-graph engine";

    py::register_exception<ParseError>(m, "RkgParseError", PyExc_ValueError);
    py::register_exception<SchemaError>(m, "RkgSchemaError", PyExc_ValueError);
    py::register_exception<ResolveError>(m, "RkgResolveError", PyExc_KeyError);
    py::register_exception<IoError>(m, "RkgIoError", PyExc_OSError);

    py::class_<GraphStore>(m, "Store")
        .def(py::init<>())
        .def("load_turtle", [](GraphStore& s, const std::string& text) { load_turtle(s, text); })
        .def("load_turtle_file",
             [](GraphStore& s, const std::string& path) { load_turtle_file(s, path); })
        .def("load_ntriples",
             [](GraphStore& s, const std::string& text) { load_ntriples(s, text); })
        .def("declare_prefix",
             [](GraphStore& s, const std::string& label, const std::string& ns) {
                 s.prefixes().declare(label, ns);
             })
        .def("add",
             [](GraphStore& s, const std::string& subject, const std::string& predicate,
                const std::string& object) {
                 return s.add(Triple{parse_ntriples_term(subject), parse_ntriples_term(predicate),
                                     parse_ntriples_term(object)});
             },
             "Insert one triple given as canonical N-Triples terms; returns True when new")
        .def("contains",
             [](GraphStore& s, const std::string& subject, const std::string& predicate,
                const std::string& object) {
                 return s.contains(Triple{parse_ntriples_term(subject),
                                          parse_ntriples_term(predicate),
                                          parse_ntriples_term(object)});
             })
        .def("match",
             [](GraphStore& s, const std::optional<std::string>& subject,
                const std::optional<std::string>& predicate,
                const std::optional<std::string>& object) {
                 py::list out;
                 for (const Triple& t :
                      s.match(opt_term(subject), opt_term(predicate), opt_term(object))) {
                     out.append(py::make_tuple(to_ntriples(t.subject), to_ntriples(t.predicate),
                                               to_ntriples(t.object)));
                 }
                 return out;
             },
             py::arg("subject") = py::none(), py::arg("predicate") = py::none(),
             py::arg("object") = py::none())
        .def("serialize_turtle", [](const GraphStore& s) { return serialize_turtle(s); })
        .def("serialize_ntriples", [](const GraphStore& s) { return serialize_ntriples(s); })
        .def("__len__", [](const GraphStore& s) { return s.size(); });

    py::class_<SchemaIndex>(m, "Schema")
        .def("class_count", [](const SchemaIndex& s) { return s.classes().size(); })
        .def("is_class",
             [](const SchemaIndex& s, const std::string& iri) { return s.is_class(Iri(iri)); })
        .def("superclasses", [](const SchemaIndex& s, const std::string& iri) {
            py::list out;
            for (const Iri& c : s.superclass_closure(Iri(iri))) out.append(c.value);
            return out;
        });

    m.def("extract_schema", &extract_schema);

    m.def("materialize",
          [](GraphStore& store, const SchemaIndex& schema) {
              return stats_dict(materialize(store, schema));
          },
          "Forward-chain the store to its inference fixpoint");

    m.def("types_of", [](const GraphStore& store, const std::string& iri) {
        py::list out;
        for (const Iri& c : types_of(store, Iri(iri))) out.append(c.value);
        return out;
    });

    m.def("validate", [](const GraphStore& store, const SchemaIndex& schema) {
        py::list out;
        for (const Violation& v : validate(store, schema).violations) {
            py::dict e;
            e["severity"] = v.severity == Severity::Error ? "error" : "warning";
            e["kind"] = violation_kind_name(v.kind);
            e["triple"] = to_ntriples(v.subject_triple);
            e["explanation"] = v.explanation;
            out.append(e);
        }
        return out;
    });

    m.def("check_consistency", [](const GraphStore& store, const SchemaIndex& schema) {
        ConsistencyReport report = check_consistency(store, schema);
        py::list clashes;
        for (const Clash& c : report.clashes) {
            py::dict e;
            e["kind"] = c.kind;
            e["individual"] = to_ntriples(c.individual);
            e["details"] = c.details;
            clashes.append(e);
        }
        py::dict out;
        out["consistent"] = report.consistent;
        out["clashes"] = clashes;
        return out;
    });

    m.def("compute_metrics", [](const SchemaIndex& schema, const GraphStore& store) {
        return metrics_dict(compute_metrics(schema, store));
    });

    m.def("query_json",
          [](const GraphStore& store, const std::string& text) {
              return to_results_json(evaluate(parse_query(text), store));
          },
          "Evaluate a query and return the results-JSON text");

    m.def("query_table", [](const GraphStore& store, const std::string& text) {
        return to_text_table(evaluate(parse_query(text), store));
    });

    m.def("apply_rules",
          [](const std::string& rules_text, const std::map<std::string, std::string>& sheets,
             const std::string& base_iri) {
              RuleSet rules = parse_rules(rules_text);
              Workbook wb = load_workbook(sheets);
              GraphStore no_schema;
              ApplyResult result =
                  apply_rules(rules, wb, standard_prefixes(base_iri), extract_schema(no_schema));
              return py::make_tuple(std::move(result.graph), result.log.to_jsonl());
          },
          py::arg("rules_text"), py::arg("sheets"),
          py::arg("base_iri") = std::string(kDefaultBaseIri));

    m.def("apply_rules_with_schema",
          [](const std::string& rules_text, const std::map<std::string, std::string>& sheets,
             const SchemaIndex& schema, const std::string& base_iri) {
              RuleSet rules = parse_rules(rules_text);
              Workbook wb = load_workbook(sheets);
              ApplyResult result = apply_rules(rules, wb, standard_prefixes(base_iri), schema);
              return py::make_tuple(std::move(result.graph), result.log.to_jsonl());
          },
          py::arg("rules_text"), py::arg("sheets"), py::arg("schema"),
          py::arg("base_iri") = std::string(kDefaultBaseIri));

    m.attr("__version__") = "0.1.0";
}
